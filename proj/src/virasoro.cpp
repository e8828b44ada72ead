#include "laxlab/virasoro.hpp"

#include "laxlab/error.hpp"
#include "laxlab/pfaff.hpp"
#include "laxlab/tau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace laxlab {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double poly_eval(const std::vector<double>& c, double z) {
    double v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

int highest_time(const std::vector<double>& t) {
    int k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != 0.0) k = static_cast<int>(i) + 1;
    return k;
}

// Operator evaluation shared by jets and polynomials. The algebra supplies d(i, x) = d/dt_i x,
// tmul(l, x) = t_l x, and the range of l worth visiting in the mixed sum.
template <class Alg>
typename Alg::Elem current(const JOperator& op, int i, const typename Alg::Elem& x, Alg& alg) {
    if (i > 0) return alg.d(i, x);
    if (i < 0) return alg.scale(alg.tmul(-i, x), -i / op.beta);
    return alg.scale(x, op.n);
}

template <class Alg>
typename Alg::Elem apply_op(const JOperator& op, int k, const typename Alg::Elem& x, Alg& alg) {
    if (op.kind == JOperator::Kind::J1) return current(op, k, x, alg);
    const double half = op.beta / 2;
    auto out = alg.scale(current(op, k, x, alg), (1 - half) * (k + 1));
    // i, j > 0
    for (int i = 1; i < k; ++i) alg.add(out, alg.d(i, alg.d(k - i, x)), half);
    // one of i, j is 0
    if (k != 0)
        alg.add(out, current(op, k, x, alg), 2 * half * op.n);
    else
        alg.add(out, x, half * op.n * op.n);
    // i = -l < 0 < j = k + l, both orders
    for (int l = std::max(1, 1 - k); l <= alg.max_mixed(k); ++l) {
        if (alg.time_zero(l)) continue;
        alg.add(out, alg.tmul(l, alg.d(k + l, x)), 2 * half * l / op.beta);
    }
    // i, j < 0
    for (int l = 1; l < -k; ++l) {
        const int m = -k - l;
        alg.add(out, alg.tmul(l, alg.tmul(m, x)), half * l * m / (op.beta * op.beta));
    }
    return out;
}

struct JetAlgebra {
    using Elem = Jet;
    std::vector<double> t;
    int K;

    Jet d(int i, const Jet& x) {
        if (i > K) throw Error(ErrorKind::depth, "operator needs d/dt_" + std::to_string(i) + " beyond the truncation");
        return x.partial(i - 1);
    }
    Jet tmul(int l, const Jet& x) {
        const double tl = l <= static_cast<int>(t.size()) ? t[l - 1] : 0.0;
        if (l <= K) return x * Jet::variable(x.space(), l - 1, tl);
        return x * tl;
    }
    Jet scale(const Jet& x, double s) { return x * s; }
    void add(Jet& acc, const Jet& x, double s) { acc += x * s; }
    int max_mixed(int) const { return static_cast<int>(t.size()); }
    bool time_zero(int l) const { return l > static_cast<int>(t.size()) || t[l - 1] == 0.0; }
};

void trim(std::vector<int>& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

struct PolyAlgebra {
    using Elem = TimePolynomial;

    static int max_var(const TimePolynomial& p) {
        int m = 0;
        for (const auto& [e, c] : p) m = std::max(m, static_cast<int>(e.size()));
        return m;
    }

    TimePolynomial d(int i, const TimePolynomial& p) {
        TimePolynomial r;
        for (const auto& [e, c] : p) {
            if (static_cast<int>(e.size()) < i || e[i - 1] == 0) continue;
            auto f = e;
            const double m = f[i - 1]--;
            trim(f);
            r[f] += m * c;
        }
        return r;
    }
    TimePolynomial tmul(int l, const TimePolynomial& p) {
        TimePolynomial r;
        for (const auto& [e, c] : p) {
            auto f = e;
            if (static_cast<int>(f.size()) < l) f.resize(l, 0);
            f[l - 1]++;
            r[f] += c;
        }
        return r;
    }
    TimePolynomial scale(const TimePolynomial& p, double s) {
        TimePolynomial r;
        if (s == 0.0) return r;
        for (const auto& [e, c] : p) r[e] = c * s;
        return r;
    }
    void add(TimePolynomial& acc, const TimePolynomial& p, double s) {
        for (const auto& [e, c] : p) acc[e] += s * c;
    }
    int max_mixed(int k) const { return max_var_ - k; }
    bool time_zero(int) const { return false; }

    int max_var_ = 0;
};

TimePolynomial apply_poly(const JOperator& op, int k, const TimePolynomial& p) {
    PolyAlgebra alg;
    alg.max_var_ = PolyAlgebra::max_var(p);
    return apply_op(op, k, p, alg);
}

double max_abs(const TimePolynomial& p) {
    double m = 0;
    for (const auto& [e, c] : p) m = std::max(m, std::abs(c));
    return m;
}

// sum_i c_i^{k+1} f(c_i) dI/dc_i by central differences along the flow, one Richardson step.
// The largest endpoint displacement is 1e-3 decay lengths.
double boundary_flow_derivative(const WeightSpec& w, int beta, const IntervalUnion& E, int n, int k,
                                const std::vector<double>& t, const std::vector<double>& f) {
    const auto c = E.endpoints();
    std::vector<double> v(c.size(), 0.0);
    double vmax = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c[i])) continue;
        v[i] = std::pow(c[i], k + 1) * poly_eval(f, c[i]);
        vmax = std::max(vmax, std::abs(v[i]));
    }
    if (vmax == 0.0) return 0.0;
    const double h = 1e-3 * w.scale() / vmax;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (std::abs(v[i]) + std::abs(v[i - 1]) > 0 && h * (std::abs(v[i]) + std::abs(v[i - 1])) >= c[i] - c[i - 1])
            throw Error(ErrorKind::precision, "endpoint stencil reaches a neighbouring endpoint");
    auto value = [&](double s) {
        std::vector<double> m = c;
        for (std::size_t i = 0; i < c.size(); ++i) m[i] += s * v[i];
        return integral_jet(w, beta, E.with_endpoints(m), n, t, 1).value();
    };
    auto central = [&](double s) { return (value(s) - value(-s)) / (2 * s); };
    return (4 * central(h / 2) - central(h)) / 3;
}

} // namespace

VirasoroWeightData weight_to_fg(const WeightSpec& w) {
    w.validate();
    VirasoroWeightData d;
    switch (w.family) {
    case WeightFamily::gaussian:
        d.a = {1.0};
        d.b = {0.0, 2 * w.b};
        break;
    case WeightFamily::laguerre:
        d.a = {0.0, 1.0};
        d.b = {-w.a, w.b};
        break;
    default: throw Error(ErrorKind::unsupported, "Virasoro data only for gaussian and laguerre weights");
    }
    // f rho z^k at points deep toward each end of the support
    const WeightSpec base{w.family, w.a, w.b, {}};
    const Interval s = base.support();
    std::vector<double> probes;
    const double far = 60 * base.scale() + 10;
    probes.push_back(std::isfinite(s.lo) ? s.lo + 1e-300 : -far);
    probes.push_back(std::isfinite(s.hi) ? s.hi - 1e-300 : far);
    d.boundary_decay = true;
    for (double z : probes)
        for (int k = 0; k <= 8; ++k) {
            const double v = std::abs(poly_eval(d.a, z) * base.density(z)) * std::pow(std::abs(z), k);
            if (!(v < 1e-12)) d.boundary_decay = false;
        }
    return d;
}

double j_apply(const JOperator& op, int k, const TauSupplier& tau, const std::vector<double>& t) {
    if (!(op.beta > 0)) throw Error(ErrorKind::domain, "beta must be positive");
    const Jet J = tau(t);
    const int need = op.kind == JOperator::Kind::J2 ? 2 : 1;
    if (J.space()->degree() < need) throw Error(ErrorKind::depth, "tau jet degree too low for the operator");
    JetAlgebra alg{t, J.space()->nvar()};
    return apply_op(op, k, J, alg).value();
}

TimePolynomial j_apply_poly(const JOperator& op, int k, const TimePolynomial& p) { return apply_poly(op, k, p); }

Jet integral_jet(const WeightSpec& w, int beta, const IntervalUnion& E, int n, const std::vector<double>& t, int K,
                 int order) {
    if (n < 1) throw Error(ErrorKind::dimension, "n must be positive");
    if (K < 1) throw Error(ErrorKind::depth, "need at least one time");
    std::vector<int> times(K);
    for (int i = 0; i < K; ++i) times[i] = i + 1;
    const WeightSpec wd = w.deformed(t);
    if (beta == 2) {
        const auto m = hankel_moments(wd, E, 2 * n - 2 + 2 * K, order);
        return tau_jet(m, n, times, 2) * factorial(n);
    }
    if (beta == 1) {
        if (n % 2) throw Error(ErrorKind::unsupported, "beta = 1 integrals are built for even n");
        const auto m = skew_inner_products(wd, E, -1, n + 2 * K, order);
        return pfaff_tau_jet(m, n, times, 2) * factorial(n);
    }
    if (beta == 4) {
        // plain-t evolution doubles the exponent, so the jet variable is half the time increment
        const auto m = skew_inner_products(wd, E, 1, 2 * n + 2 * K, order);
        Jet J = pfaff_tau_jet(m, 2 * n, times, 2) * factorial(n);
        for (int q = 0; q < J.space()->size(); ++q) J.coeff(q) /= std::pow(2.0, J.space()->total_degree(q));
        return J;
    }
    throw Error(ErrorKind::domain, "beta must be 1, 2 or 4");
}

VirasoroResidual virasoro_residual(const WeightSpec& w, int beta, const IntervalUnion& E, int n, int k,
                                   const std::vector<double>& t) {
    if (k < -1) throw Error(ErrorKind::domain, "constraints start at k = -1");
    const auto fg = weight_to_fg(w);
    const int deg_f = static_cast<int>(fg.a.size()) - 1, deg_g = static_cast<int>(fg.b.size()) - 1;
    const int K = std::max({1, k + deg_f + highest_time(t), k + deg_g + 1});

    const Jet I = integral_jet(w, beta, E, n, t, K);
    const TauSupplier tau = [&](const std::vector<double>&) { return I; };

    VirasoroResidual r;
    r.terms.push_back(-boundary_flow_derivative(w, beta, E, n, k, t, fg.a));

    for (std::size_t i = 0; i < fg.a.size(); ++i)
        if (fg.a[i] != 0.0)
            r.terms.push_back(fg.a[i] * j_apply(JOperator::beta2(beta, n), k + static_cast<int>(i), tau, t));
    for (std::size_t i = 0; i < fg.b.size(); ++i)
        if (fg.b[i] != 0.0)
            r.terms.push_back(-fg.b[i] * j_apply(JOperator::beta1(beta, n), k + static_cast<int>(i) + 1, tau, t));

    // odd k at t = 0 can make every term vanish, so |I| sets the floor
    double sum = 0, scale = std::abs(I.value());
    for (double v : r.terms) {
        sum += v;
        scale = std::max(scale, std::abs(v));
    }
    r.residual = scale > 0 ? std::abs(sum) / scale : 0.0;
    return r;
}

double central_charge(double beta) { return 13 - 3 * beta - 12 / beta; }

double virasoro_commutator_check(double beta, int k, int l, double n, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(0, 6);
    const JOperator op = JOperator::beta2(beta, n);
    const double c = central_charge(beta);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        TimePolynomial p;
        for (int term = 0; term < 24; ++term) {
            // random monomial of total degree <= 6 in t_1..t_6
            std::vector<int> e(6, 0);
            int budget = expo(rng);
            for (int b = 0; b < budget; ++b) e[std::uniform_int_distribution<int>(0, 5)(rng)]++;
            trim(e);
            p[e] += coef(rng);
        }
        const auto kl = apply_poly(op, k, apply_poly(op, l, p));
        const auto lk = apply_poly(op, l, apply_poly(op, k, p));
        TimePolynomial diff = kl;
        PolyAlgebra alg;
        alg.add(diff, lk, -1.0);
        alg.add(diff, apply_poly(op, k + l, p), -(k - l));
        if (k + l == 0) alg.add(diff, p, -c * (k * k * k - k) / 12.0);
        const double scale = std::max({max_abs(kl), max_abs(lk), 1.0});
        worst = std::max(worst, max_abs(diff) / scale);
    }
    return worst;
}

} // namespace laxlab
