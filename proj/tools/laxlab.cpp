#include "report.hpp"

#include "laxlab/aci.hpp"
#include "laxlab/ensembles.hpp"
#include "laxlab/error.hpp"
#include "laxlab/fredholm.hpp"
#include "laxlab/gapodes.hpp"
#include "laxlab/pfaff.hpp"
#include "laxlab/tau.hpp"
#include "laxlab/toda.hpp"
#include "laxlab/twotoda.hpp"
#include "laxlab/virasoro.hpp"
#include "laxlab/weight.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

using namespace laxlab;
using cli::RunReport;

namespace {

struct Common {
    bool check = false;
    bool timing = false;
    std::string out;
    std::uint64_t seed = 42;
};

struct Leaf {
    CLI::App* app;
    std::function<RunReport()> run;
};

double max_of(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::isfinite(x) ? std::abs(x) : INFINITY);
    return m;
}

void set_check(RunReport& r, const Common& c, double tol, bool extra_ok = true) {
    if (!c.check) return;
    r.tolerance = tol;
    r.passed = r.max_abs_residual < tol && extra_ok;
}

// s in an endpoint stands for the current grid value
IntervalUnion interval_at(const std::string& text, double s) {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out, tok;
    auto flush = [&] {
        out += tok == "s" ? fmt(s) : tok == "-s" ? fmt(-s) : tok;
        tok.clear();
    };
    for (char ch : text) {
        if (ch == ':' || ch == ',') {
            flush();
            out += ch;
        } else {
            tok += ch;
        }
    }
    flush();
    return IntervalUnion::parse(out);
}

bool has_variable(const std::string& text) {
    for (const auto& piece : {std::string("s:"), std::string(":s"), std::string("-s:"), std::string(":-s")})
        if (text.find(piece) != std::string::npos) return true;
    return false;
}

HankelMoments random_positive_hankel(int n, std::uint64_t seed) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -1.5 + 3.0 * (i + 0.2 + 0.6 * cli::counter_uniform(seed, 2 * i)) / n;
        w[i] = 0.1 + 0.9 * cli::counter_uniform(seed, 2 * i + 1);
    }
    return discrete_moments(x, w, 160);
}

SystemKind system_kind(const std::string& s) {
    if (s == "euler") return SystemKind::euler;
    if (s == "geodesic") return SystemKind::geodesic;
    if (s == "neumann") return SystemKind::neumann;
    if (s == "central-force" || s == "central_force") return SystemKind::central_force;
    throw Error(ErrorKind::usage, "unknown system '" + s + "'");
}

FKind f_kind(const std::string& s, SystemKind k) {
    if (s.empty()) return hamiltonian_kind(k);
    if (s == "three-halves") return FKind::three_halves;
    if (s == "log") return FKind::log;
    if (s == "quadratic") return FKind::quadratic;
    throw Error(ErrorKind::usage, "unknown hamiltonian '" + s + "'");
}

EnsembleFamily family_of(const WeightSpec& w) {
    if (w.family == WeightFamily::gaussian) return EnsembleFamily::gaussian;
    if (w.family == WeightFamily::laguerre) return EnsembleFamily::laguerre;
    throw Error(ErrorKind::unsupported, "only gaussian and laguerre weights have these equations");
}

class Cli {
public:
    Cli() : app_("laxlab: integrable-systems and random-matrix checkers") {
        app_.option_defaults()->always_capture_default();
        app_.require_subcommand(1);
        toda();
        pfaff();
        twotoda();
        fredholm();
        gapode();
        virasoro();
        ensemble();
        aci();
        tau();
    }

    int main(int argc, char** argv) {
        try {
            app_.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app_.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app_.exit(e);
        } catch (const CLI::ParseError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            hint(argc, argv);
            return 2;
        }
        const Leaf* leaf = selected();
        if (!leaf) {
            std::cerr << "usage error: no command selected\n";
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        RunReport r;
        try {
            r = leaf->run();
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return e.kind() == ErrorKind::usage ? 2 : 3;
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.command = leaf->app->get_parent()->get_name() + " " + leaf->app->get_name();
        std::cerr << r.command << ": " << wall << " s\n";
        r.parameters = echo(leaf->app);
        r.seed = common_.seed;
        if (common_.timing) r.wall_time = wall;
        const bool csv = common_.out.size() > 4 && common_.out.substr(common_.out.size() - 4) == ".csv";
        const std::string bytes = csv ? cli::emit_csv(r) : cli::emit_json(r);
        if (common_.out.empty()) {
            std::cout << bytes;
        } else {
            std::ofstream f(common_.out, std::ios::binary);
            if (!f) {
                std::cerr << "cannot write " << common_.out << "\n";
                return 2;
            }
            f << bytes;
        }
        return common_.check && !r.passed ? 4 : 0;
    }

private:
    CLI::App app_;
    Common common_;
    std::vector<Leaf> leaves_;
    // option storage; std::map keeps addresses stable
    std::map<std::string, std::string> s_;
    std::map<std::string, double> d_;
    std::map<std::string, int> i_;

    CLI::App* leaf(CLI::App* group, const std::string& name, const std::string& desc) {
        auto* a = group->add_subcommand(name, desc);
        a->add_flag("--check", common_.check, "exit 4 when the residual exceeds the acceptance tolerance");
        a->add_flag("--timing", common_.timing, "record wall time in the report");
        a->add_option("--out", common_.out, "write the report here (.json or .csv)");
        a->add_option("--seed", common_.seed, "random seed");
        return a;
    }
    std::string& str(CLI::App* a, const std::string& flag, const std::string& def, const std::string& desc = "") {
        auto& v = s_[a->get_parent()->get_name() + a->get_name() + flag];
        v = def;
        a->add_option(flag, v, desc);
        return v;
    }
    double& num(CLI::App* a, const std::string& flag, double def, const std::string& desc = "") {
        auto& v = d_[a->get_parent()->get_name() + a->get_name() + flag];
        v = def;
        a->add_option(flag, v, desc);
        return v;
    }
    int& integer(CLI::App* a, const std::string& flag, int def, const std::string& desc = "") {
        auto& v = i_[a->get_parent()->get_name() + a->get_name() + flag];
        v = def;
        a->add_option(flag, v, desc);
        return v;
    }

    const Leaf* selected() const {
        for (const auto& l : leaves_)
            if (l.app->parsed()) return &l;
        return nullptr;
    }

    static nlohmann::json echo(CLI::App* a) {
        nlohmann::json p = nlohmann::json::object();
        for (const auto* opt : a->get_options()) {
            if (opt->get_lnames().empty()) continue;
            const std::string key = opt->get_lnames()[0];
            if (key == "help" || key == "out" || key == "timing" || key == "seed") continue;
            if (opt->get_expected_min() == 0)
                p[key] = opt->count() > 0;
            else
                p[key] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
        }
        return p;
    }

    // suggestions for mistyped flags and subcommands
    void hint(int argc, char** argv) const {
        const CLI::App* deepest = &app_;
        for (bool moved = true; moved;) {
            moved = false;
            for (const auto* sub : deepest->get_subcommands({}))
                if (sub->parsed()) {
                    deepest = sub;
                    moved = true;
                    break;
                }
        }
        std::vector<std::string> known;
        for (const auto* opt : deepest->get_options({}))
            for (const auto& n : opt->get_lnames()) known.push_back("--" + n);
        for (const auto* sub : deepest->get_subcommands({})) known.push_back(sub->get_name());
        for (int i = 1; i < argc; ++i) {
            const std::string word = argv[i];
            if (std::find(known.begin(), known.end(), word) != known.end()) continue;
            const auto s = cli::suggest(word, known);
            if (!s.empty()) std::cerr << "did you mean " << s.front() << " instead of " << word << "?\n";
        }
    }

    void add(CLI::App* a, std::function<RunReport()> f) { leaves_.push_back({a, std::move(f)}); }

    void toda() {
        auto* g = app_.add_subcommand("toda", "Toda lattice")->require_subcommand(1);
        {
            auto* a = leaf(g, "flow", "moment/tau, Lax ODE and QR routes on random positive Hankel data");
            auto& n = integer(a, "--n", 6);
            auto& k = integer(a, "--k", 1);
            auto& t_end = num(a, "--t-end", 1.0);
            auto& step = num(a, "--step", 1e-3);
            auto& samples = integer(a, "--samples", 10);
            auto& routes = str(a, "--routes", "ode,qr,tau");
            add(a, [&] {
                const auto m0 = random_positive_hankel(n, common_.seed);
                const auto res = toda_route_comparison(m0, n, k, t_end, step, samples);
                std::vector<std::string> sel;
                std::stringstream ss(routes);
                for (std::string s; std::getline(ss, s, ',');) {
                    if (s != "ode" && s != "qr" && s != "tau") throw Error(ErrorKind::usage, "unknown route '" + s + "'");
                    sel.push_back(s);
                }
                auto on = [&](const char* s) { return std::find(sel.begin(), sel.end(), s) != sel.end(); };
                RunReport r;
                std::vector<double> row;
                if (on("tau") && on("ode")) r.columns.push_back("tau_vs_ode"), row.push_back(res.tau_vs_ode);
                if (on("tau") && on("qr")) r.columns.push_back("tau_vs_qr"), row.push_back(res.tau_vs_qr);
                if (on("ode") && on("qr")) r.columns.push_back("ode_vs_qr"), row.push_back(res.ode_vs_qr);
                r.columns.push_back("eigen_drift");
                row.push_back(res.eigen_drift);
                r.rows.push_back(row);
                row.pop_back();
                r.max_abs_residual = max_of(row);
                r.self_reported_error = res.eigen_drift;
                r.summary["eigen_drift"] = res.eigen_drift;
                set_check(r, common_, 1e-6, res.eigen_drift < 1e-8);
                return r;
            });
        }
        {
            auto* a = leaf(g, "poly", "orthonormal polynomials from Hankel determinants");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& n = integer(a, "--n", 5);
            auto& grid = str(a, "--grid", "-2:2:0.5");
            add(a, [&] {
                const auto w = WeightSpec::parse(weight);
                const IntervalUnion sup({w.support()});
                const auto m = hankel_moments(w, sup, 2 * n + 2);
                RunReport r;
                r.columns = {"z"};
                for (int j = 0; j <= n; ++j) r.columns.push_back("p" + std::to_string(j));
                for (double z : cli::parse_grid(grid)) {
                    std::vector<double> row{z};
                    for (int j = 0; j <= n; ++j) row.push_back(orthopoly_eval(m, j, z));
                    r.rows.push_back(row);
                }
                const auto q = weighted_rule(w, sup, 2 * n + 120);
                double defect = 0;
                for (int i = 0; i <= n; ++i)
                    for (int j = 0; j <= i; ++j) {
                        double s = 0;
                        for (std::size_t p = 0; p < q.nodes.size(); ++p)
                            s += q.weights[p] * orthopoly_eval(m, i, q.nodes[p]) * orthopoly_eval(m, j, q.nodes[p]);
                        defect = std::max(defect, std::abs(s - (i == j ? 1.0 : 0.0)));
                    }
                r.summary["orthonormality_defect"] = defect;
                r.max_abs_residual = defect;
                set_check(r, common_, 1e-8);
                return r;
            });
        }
    }

    void pfaff() {
        auto* g = app_.add_subcommand("pfaff", "Pfaff lattice")->require_subcommand(1);
        {
            auto* a = leaf(g, "flow", "moment evolution vs the Pfaff Lax ODE");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& interval = str(a, "--interval", "-inf:inf");
            auto& beta = integer(a, "--beta", 1);
            auto& size = integer(a, "--size", 12);
            auto& k = integer(a, "--k", 1);
            auto& t = num(a, "--t", 0.5);
            auto& step = num(a, "--step", 1e-3);
            add(a, [&] {
                if (beta != 1 && beta != 4) throw Error(ErrorKind::usage, "--beta must be 1 or 4");
                const auto m = skew_inner_products(WeightSpec::parse(weight), IntervalUnion::parse(interval),
                                                   beta == 1 ? -1 : 1, size);
                RunReport r;
                r.columns = {"t", "interior_difference"};
                const double d = pfaff_route_difference(m, k, t, step, size);
                r.rows.push_back({t, d});
                r.max_abs_residual = d;
                set_check(r, common_, 1e-6);
                return r;
            });
        }
        {
            auto* a = leaf(g, "check-kp", "Pfaff-KP residual of skew moment Pfaffians");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& interval = str(a, "--interval", "-inf:inf");
            auto& beta = integer(a, "--beta", 1);
            auto& ns = str(a, "--n", "2,4");
            auto& size = integer(a, "--size", 18);
            add(a, [&] {
                if (beta != 1 && beta != 4) throw Error(ErrorKind::usage, "--beta must be 1 or 4");
                const auto m = skew_inner_products(WeightSpec::parse(weight), IntervalUnion::parse(interval),
                                                   beta == 1 ? -1 : 1, size);
                RunReport r;
                r.columns = {"n", "residual"};
                std::vector<double> res;
                for (int n : cli::parse_int_list(ns)) {
                    res.push_back(pfaffkp_residual(m, n).residual);
                    r.rows.push_back({double(n), res.back()});
                }
                r.max_abs_residual = max_of(res);
                set_check(r, common_, 1e-6);
                return r;
            });
        }
    }

    void twotoda() {
        auto* g = app_.add_subcommand("twotoda", "two-Toda lattice and coupled matrices")->require_subcommand(1);
        {
            auto* a = leaf(g, "pde", "coupled Gaussian gap-probability PDE");
            auto& c = num(a, "--c", 0.5);
            auto& x = num(a, "--a", 0.3);
            auto& y = num(a, "--b", 0.3);
            auto& n = integer(a, "--n", 1);
            add(a, [&] {
                const auto res = coupled_pde_residual(c, x, y, n);
                RunReport r;
                r.columns = {"a", "b", "c", "residual", "lhs", "rhs"};
                r.rows.push_back({x, y, c, res.residual, res.lhs, res.rhs});
                r.summary["probability"] = coupled_gap_probability(n, x, y, c);
                r.max_abs_residual = res.residual;
                set_check(r, common_, 1e-3);
                return r;
            });
        }
        {
            auto* a = leaf(g, "identities", "tau identities and the Wronskian relation");
            auto& c = num(a, "--c", 0.5);
            auto& ns = str(a, "--n", "2");
            auto& e1 = str(a, "--set1", "-inf:inf");
            auto& e2 = str(a, "--set2", "-inf:inf");
            auto& size = integer(a, "--size", 16);
            add(a, [&] {
                const auto m = bimoments(c, IntervalUnion::parse(e1), IntervalUnion::parse(e2), size);
                RunReport r;
                r.columns = {"n", "s_identity", "t_identity", "wronskian", "kp_t", "kp_s"};
                std::vector<double> res;
                for (int n : cli::parse_int_list(ns)) {
                    const auto w = wronskian_identity_residual(m, n);
                    r.rows.push_back({double(n), w.s_identity, w.t_identity, w.wronskian,
                                      bimoment_kp_residual(m, n, 1), bimoment_kp_residual(m, n, 2)});
                    res.insert(res.end(), {w.s_identity, w.t_identity, w.wronskian});
                }
                r.max_abs_residual = max_of(res);
                r.self_reported_error = bimoment_quadrature_error(c, m.E1, m.E2, size);
                set_check(r, common_, 1e-8);
                return r;
            });
        }
    }

    void fredholm() {
        auto* g = app_.add_subcommand("fredholm", "Fredholm determinants of integrable kernels")->require_subcommand(1);
        {
            auto* a = leaf(g, "gap", "det(I - lambda K) on E(s) over a grid of s");
            auto& kernel = str(a, "--kernel", "airy");
            auto& interval = str(a, "--interval", "s:inf");
            auto& grid = str(a, "--s-grid", "-6:2:0.25");
            auto& order = integer(a, "--order", 64);
            auto& lambda = num(a, "--lambda", 1.0);
            add(a, [&] {
                auto k = KernelSpec::parse(kernel);
                k.lambda = lambda;
                const std::vector<double> s = has_variable(interval) ? cli::parse_grid(grid) : std::vector<double>{0.0};
                RunReport r;
                r.columns = {"s", "det", "self_consistency"};
                std::vector<double> err;
                for (double v : s) {
                    const auto d = nystrom_det_checked(k, interval_at(interval, v), order);
                    r.rows.push_back({v, d.value, d.error});
                    err.push_back(d.error);
                }
                auto k0 = k;
                k0.lambda = 0.0;
                const double smoke = nystrom_det(k0, interval_at(interval, s.front()), order);
                r.summary["lambda0_det"] = smoke;
                r.max_abs_residual = max_of(err);
                r.self_reported_error = r.max_abs_residual;
                set_check(r, common_, 1e-10, smoke == 1.0);
                return r;
            });
        }
        {
            auto* a = leaf(g, "kernel-table", "kernel values on grid x grid");
            auto& kernel = str(a, "--kernel", "airy");
            auto& grid = str(a, "--grid", "-2:2:0.5");
            add(a, [&] {
                const auto k = KernelSpec::parse(kernel);
                const auto pts = cli::parse_grid(grid);
                RunReport r;
                r.columns = {"y", "z", "K"};
                std::vector<double> asym;
                for (double y : pts)
                    for (double z : pts) {
                        const double v = kernel_eval(k, y, z);
                        r.rows.push_back({y, z, v});
                        asym.push_back(v - kernel_eval(k, z, y));
                    }
                r.max_abs_residual = max_of(asym);
                set_check(r, common_, 1e-12);
                return r;
            });
        }
        {
            auto* a = leaf(g, "scaling", "rescaled Hermite kernel vs its Airy or sine limit");
            auto& regime = str(a, "--regime", "edge");
            auto& ns = str(a, "--N", "20,50,80");
            auto& grid = str(a, "--grid", "-2:2:0.25");
            add(a, [&] {
                ScalingRegime reg;
                if (regime == "edge")
                    reg = ScalingRegime::edge;
                else if (regime == "bulk")
                    reg = ScalingRegime::bulk;
                else
                    throw Error(ErrorKind::usage, "--regime is edge or bulk");
                const auto pts = cli::parse_grid(grid);
                RunReport r;
                r.columns = {"N", "sup_error"};
                std::vector<double> err;
                for (int N : cli::parse_int_list(ns)) {
                    err.push_back(scaling_limit_error(N, reg, pts));
                    r.rows.push_back({double(N), err.back()});
                }
                bool decreasing = true;
                for (std::size_t i = 1; i < err.size(); ++i) decreasing = decreasing && err[i] < err[i - 1];
                r.summary["decreasing"] = decreasing;
                r.max_abs_residual = err.empty() ? 0.0 : err.back();
                set_check(r, common_, 5e-2, decreasing);
                return r;
            });
        }
    }

    void gapode() {
        auto* g = app_.add_subcommand("gapode", "differential equations for gap probabilities")->require_subcommand(1);
        auto grid_report = [](const std::string& x, const std::vector<double>& pts, const std::vector<double>& res) {
            RunReport r;
            r.columns = {x, "residual"};
            for (std::size_t i = 0; i < pts.size(); ++i) r.rows.push_back({pts[i], res[i]});
            r.max_abs_residual = max_of(res);
            return r;
        };
        {
            auto* a = leaf(g, "pii", "Painleve II for the Airy determinant");
            auto& grid = str(a, "--grid", "-6:2:0.25");
            auto& order = integer(a, "--order", 64);
            add(a, [&, grid_report] {
                const auto pts = cli::parse_grid(grid);
                auto r = grid_report("s", pts, pii_residual(pts, order));
                double err = 0;
                for (double s : pts)
                    err = std::max(err, nystrom_det_checked(KernelSpec::airy(), IntervalUnion({{s, INFINITY}}), order).error);
                r.self_reported_error = err;
                set_check(r, common_, 1e-4, err < 1e-10);
                return r;
            });
        }
        {
            auto* a = leaf(g, "pv", "Painleve V for the Bessel determinant");
            auto& nu = num(a, "--nu", 0.0);
            auto& grid = str(a, "--grid", "0.5:5:0.25");
            auto& order = integer(a, "--order", 64);
            add(a, [&, grid_report] {
                const auto pts = cli::parse_grid(grid);
                auto r = grid_report("A", pts, pv_residual(nu, pts, order));
                set_check(r, common_, 1e-4);
                return r;
            });
        }
        {
            auto* a = leaf(g, "airy-pde", "boundary PDE for the Airy determinant on a union of intervals");
            auto& interval = str(a, "--interval", "-4:-1,1:inf");
            auto& order = integer(a, "--order", 64);
            add(a, [&] {
                RunReport r;
                r.columns = {"residual"};
                r.max_abs_residual = airy_pde_residual(IntervalUnion::parse(interval), order);
                r.rows.push_back({r.max_abs_residual});
                set_check(r, common_, 1e-3);
                return r;
            });
        }
        {
            auto* a = leaf(g, "bessel-pde", "boundary PDE for the Bessel determinant on a union of intervals");
            auto& nu = num(a, "--nu", 0.0);
            auto& interval = str(a, "--interval", "0.5:1.5,2:3");
            auto& order = integer(a, "--order", 64);
            add(a, [&] {
                RunReport r;
                r.columns = {"residual"};
                r.max_abs_residual = bessel_pde_residual(nu, IntervalUnion::parse(interval), order);
                r.rows.push_back({r.max_abs_residual});
                set_check(r, common_, 1e-3);
                return r;
            });
        }
        {
            auto* a = leaf(g, "beta-ode", "ODE in the right endpoint for beta-ensemble gap probabilities");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& beta = integer(a, "--beta", 2);
            auto& n = integer(a, "--n", 2);
            auto& grid = str(a, "--grid", "-2:2:0.25");
            add(a, [&, grid_report] {
                const auto w = WeightSpec::parse(weight);
                const auto fam = family_of(w);
                const auto pts = cli::parse_grid(grid);
                const double wa = fam == EnsembleFamily::laguerre ? w.a : 0.0;
                auto r = grid_report("x", pts, beta_ode_residual(fam, beta, n, wa, w.b, pts, gap_supplier(beta, w)));
                set_check(r, common_, beta == 2 && fam == EnsembleFamily::gaussian ? 1e-5 : 1e-4);
                return r;
            });
        }
    }

    void virasoro() {
        auto* g = app_.add_subcommand("virasoro", "Virasoro constraints")->require_subcommand(1);
        {
            auto* a = leaf(g, "check", "boundary plus time constraints on the beta-integral");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& beta = integer(a, "--beta", 2);
            auto& n = integer(a, "--n", 3);
            auto& interval = str(a, "--interval", "-inf:0.5");
            auto& ks = str(a, "--k", "-1,0,1,2");
            auto& times = str(a, "--times", "");
            add(a, [&] {
                const auto w = WeightSpec::parse(weight);
                const auto E = IntervalUnion::parse(interval);
                const auto t = cli::parse_list(times);
                RunReport r;
                r.columns = {"k", "residual"};
                std::vector<double> res;
                for (int k : cli::parse_int_list(ks)) {
                    res.push_back(virasoro_residual(w, beta, E, n, k, t).residual);
                    r.rows.push_back({double(k), res.back()});
                }
                r.max_abs_residual = max_of(res);
                set_check(r, common_, beta == 2 ? 1e-6 : 1e-4);
                return r;
            });
        }
        {
            auto* a = leaf(g, "commutators", "Virasoro algebra of the dressed operators on polynomials");
            auto& beta = num(a, "--beta", 2.0);
            auto& n = num(a, "--n", 3.0);
            auto& kmin = integer(a, "--kmin", -2);
            auto& kmax = integer(a, "--kmax", 3);
            add(a, [&] {
                RunReport r;
                r.columns = {"k", "l", "defect"};
                std::vector<double> res;
                for (int k = kmin; k <= kmax; ++k)
                    for (int l = kmin; l <= kmax; ++l) {
                        res.push_back(virasoro_commutator_check(beta, k, l, n, 4, static_cast<unsigned>(common_.seed)));
                        r.rows.push_back({double(k), double(l), res.back()});
                    }
                const double c = central_charge(beta);
                r.summary["central_charge"] = c;
                r.max_abs_residual = max_of(res);
                set_check(r, common_, 1e-10, std::abs(c - (13 - 3 * beta - 12 / beta)) < 1e-14);
                return r;
            });
        }
    }

    void ensemble() {
        auto* g = app_.add_subcommand("ensemble", "beta-ensemble gap probabilities")->require_subcommand(1);
        {
            auto* a = leaf(g, "gap", "P(all eigenvalues in E) by quadrature");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& beta = integer(a, "--beta", 2);
            auto& n = integer(a, "--n", 2);
            auto& interval = str(a, "--interval", "-inf:0");
            add(a, [&] {
                const EnsembleSpec e{beta, WeightSpec::parse(weight), n};
                const auto E = IntervalUnion::parse(interval);
                const double p = gap_probability(e, E);
                RunReport r;
                r.columns = {"probability"};
                r.rows.push_back({p});
                if (beta == 2) {
                    const double q = gap_probability_gram(e, E);
                    r.summary["gram_route"] = q;
                    r.max_abs_residual = std::abs(p - q);
                }
                set_check(r, common_, 1e-10, p >= 0 && p <= 1 + 1e-12);
                return r;
            });
        }
        {
            auto* a = leaf(g, "sample", "Monte Carlo gap estimate against quadrature");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& beta = integer(a, "--beta", 2);
            auto& n = integer(a, "--n", 2);
            auto& interval = str(a, "--interval", "-inf:0");
            auto& count = integer(a, "--count", 100000);
            add(a, [&] {
                const EnsembleSpec e{beta, WeightSpec::parse(weight), n};
                const auto E = IntervalUnion::parse(interval);
                const auto [p, se] = empirical_gap(sample_ensemble(e, count, common_.seed), E);
                const double q = gap_probability(e, E);
                RunReport r;
                r.columns = {"empirical", "sigma", "quadrature"};
                r.rows.push_back({p, se, q});
                r.max_abs_residual = se > 0 ? std::abs(p - q) / se : (p == q ? 0.0 : INFINITY);
                r.self_reported_error = se;
                r.summary["units"] = "sigma";
                set_check(r, common_, 3.0);
                return r;
            });
        }
        {
            auto* a = leaf(g, "inductive", "relation between P_n and P_{n -+ index}");
            auto& weight = str(a, "--weight", "gaussian:1");
            auto& beta = integer(a, "--beta", 1);
            auto& n = integer(a, "--n", 2);
            auto& grid = str(a, "--grid", "-2:2:0.5");
            add(a, [&] {
                const EnsembleSpec e{beta, WeightSpec::parse(weight), n};
                const auto pts = cli::parse_grid(grid);
                const auto res = inductive_relation_residual(e, pts);
                RunReport r;
                r.columns = {"x", "residual"};
                for (std::size_t i = 0; i < pts.size(); ++i) r.rows.push_back({pts[i], res[i]});
                r.max_abs_residual = max_of(res);
                set_check(r, common_, 1e-4);
                return r;
            });
        }
    }

    void aci() {
        auto* g = app_.add_subcommand("aci", "Lax flows with a spectral parameter")->require_subcommand(1);
        auto system = [this](CLI::App* a) {
            return std::array<std::string*, 5>{&str(a, "--system", "neumann"), &str(a, "--alpha", "1,2,3.5"),
                                               &str(a, "--gamma", ""), &str(a, "--x", "0.6,-0.4,0.8"),
                                               &str(a, "--y", "0.3,0.9,-0.5")};
        };
        auto build = [](const std::array<std::string*, 5>& s) {
            return build_system(system_kind(*s[0]), cli::parse_list(*s[1]), cli::parse_list(*s[2]),
                                cli::parse_list(*s[3]), cli::parse_list(*s[4]));
        };
        auto curve_rows = [](RunReport& r, const SpectralCurve& a, const SpectralCurve* b) {
            for (const auto& [key, v] : a.q) {
                std::vector<double> row{double(key.first), double(key.second), v};
                if (b) row.push_back(b->coeff(key.first, key.second));
                r.rows.push_back(row);
            }
        };
        {
            auto* a = leaf(g, "run", "RK4 flow and spectral-curve drift");
            const auto s = system(a);
            auto& ham = str(a, "--hamiltonian", "", "three-halves, log or quadratic; default per system");
            auto& t_end = num(a, "--t-end", 10.0);
            auto& step = num(a, "--step", 1e-3);
            add(a, [&, s, build, curve_rows] {
                const auto a0 = build(s);
                const auto f = f_kind(ham, system_kind(*s[0]));
                const auto q0 = spectral_curve_coeffs(a0);
                const auto a1 = aci_flow(a0, f, t_end, step);
                const auto q1 = spectral_curve_coeffs(a1);
                RunReport r;
                r.columns = {"k", "l", "q_start", "q_end"};
                curve_rows(r, q0, &q1);
                r.max_abs_residual = spectral_curve_drift(q0, q1);
                r.summary["manifold_defect"] = a1.manifold_defect();
                set_check(r, common_, 1e-9, a1.manifold_defect() < 1e-10);
                return r;
            });
        }
        {
            auto* a = leaf(g, "curve", "coefficients of det(z - a(h))");
            const auto s = system(a);
            add(a, [&, s, build, curve_rows] {
                const auto c = spectral_curve_coeffs(build(s));
                RunReport r;
                r.columns = {"k", "l", "q"};
                curve_rows(r, c, nullptr);
                r.summary["conditioning_warning"] = c.conditioning_warning;
                const int n = static_cast<int>(cli::parse_list(*s[1]).size());
                r.max_abs_residual = std::abs(c.coeff(0, n) - 1.0);
                set_check(r, common_, 1e-12);
                return r;
            });
        }
    }

    void tau() {
        auto* g = app_.add_subcommand("tau", "Hankel tau functions")->require_subcommand(1);
        auto* a = leaf(g, "kp-check", "KP residual of Hankel determinants");
        auto& weight = str(a, "--weight", "gaussian:1");
        auto& interval = str(a, "--interval", "");
        auto& nmax = integer(a, "--nmax", 5);
        auto& times = str(a, "--times", "");
        add(a, [&] {
            const auto w = WeightSpec::parse(weight);
            const auto E = interval.empty() ? IntervalUnion({w.support()}) : IntervalUnion::parse(interval);
            const auto t = cli::parse_list(times);
            auto m = hankel_moments(w, E, t.empty() ? 4 * nmax + 20 : 120);
            if (!t.empty()) m = evolve_hankel(m, t, 4 * nmax + 20);
            RunReport r;
            r.columns = {"n", "residual"};
            std::vector<double> res;
            for (int n = 1; n <= nmax; ++n) {
                res.push_back(kp_residual(m, n).residual);
                r.rows.push_back({double(n), res.back()});
            }
            r.max_abs_residual = max_of(res);
            set_check(r, common_, 1e-6);
            return r;
        });
    }
};

} // namespace

int main(int argc, char** argv) {
    Cli c;
    return c.main(argc, argv);
}
