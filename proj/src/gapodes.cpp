#include "laxlab/gapodes.hpp"

#include "laxlab/error.hpp"
#include "laxlab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

namespace laxlab {

namespace {

double normalized(std::initializer_list<double> terms) {
    double s = 0, mx = 0;
    for (double t : terms) {
        s += t;
        mx = std::max(mx, std::abs(t));
    }
    return mx == 0.0 ? 0.0 : std::abs(s) / mx;
}

// order vs 2 order on the log scale
void require_accuracy(const KernelSpec& k, const IntervalUnion& E, int order, double tol) {
    const double a = nystrom_det(k, E, order), b = nystrom_det(k, E, 2 * order);
    if (!(a > 0 && b > 0) || std::abs(std::log(a) - std::log(b)) > tol)
        throw Error(ErrorKind::precision, "determinant not resolved to " + std::to_string(tol) + " on " + E.str());
}

Jet single_endpoint_log_det(const KernelSpec& k, const IntervalUnion& E, int order) {
    const auto sp = make_jet_space(1, 4);
    return fredholm_log_det_jet(k, E, [&](double c) { return Jet::variable(sp, 0, c); }, order);
}

} // namespace

BoundaryOperator BoundaryOperator::airy(int n_odd) {
    if (n_odd < 1 || n_odd % 2 == 0) throw Error(ErrorKind::domain, "airy boundary operator index must be odd");
    return {Kind::airy, n_odd, {}};
}

BoundaryOperator BoundaryOperator::bessel(int n_odd) {
    if (n_odd < 1 || n_odd % 2 == 0) throw Error(ErrorKind::domain, "bessel boundary operator index must be odd");
    return {Kind::bessel, n_odd, {}};
}

BoundaryOperator BoundaryOperator::weighted(int k, std::function<double(double)> w) {
    if (k < -1) throw Error(ErrorKind::domain, "weighted boundary operator needs k >= -1");
    return {Kind::weighted, k, std::move(w)};
}

double BoundaryOperator::coefficient(double c) const {
    switch (kind) {
    case Kind::airy:
        return std::pow(c, (n - 1) / 2);
    case Kind::bessel:
        return std::pow(c, (n + 1) / 2);
    case Kind::weighted:
        return std::pow(c, n + 1) * (weight ? weight(c) : 1.0);
    }
    return 0.0;
}

BoundaryFunction boundary_op(const BoundaryOperator& op, const BoundaryFunction& F) {
    const int order = F.order + 1;
    if (order > 4) throw Error(ErrorKind::unsupported, "boundary operator compositions stop at total order 4");
    std::vector<double> sorted;
    for (double c : F.endpoints)
        if (std::isfinite(c)) sorted.push_back(c);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) throw Error(ErrorKind::domain, "endpoint collision");
    if (!(F.noise >= 0.0) || !std::isfinite(F.noise)) throw Error(ErrorKind::precision, "noise bound must be finite");

    const double h = std::max(1e-2, std::pow(F.noise, 1.0 / (order + 1)));
    // the widest stencil must stay between neighbours
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double reach = h * (std::abs(op.coefficient(sorted[i])) + std::abs(op.coefficient(sorted[i - 1])));
        if (reach >= sorted[i] - sorted[i - 1])
            throw Error(ErrorKind::precision, "finite difference stencil reaches a neighbouring endpoint");
    }

    BoundaryFunction out;
    out.endpoints = F.endpoints;
    out.order = order;
    out.noise = 3.0 * F.noise / h;
    out.f = [op, f = F.f, h](const std::vector<double>& c) {
        std::vector<double> v(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) v[i] = std::isfinite(c[i]) ? op.coefficient(c[i]) : 0.0;
        auto central = [&](double step) {
            std::vector<double> p = c, m = c;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (v[i] == 0.0) continue;
                p[i] += step * v[i];
                m[i] -= step * v[i];
            }
            return (f(p) - f(m)) / (2 * step);
        };
        return (4.0 * central(h / 2) - central(h)) / 3.0;
    };
    return out;
}

std::vector<double> pii_residual(const std::vector<double>& s_grid, int order) {
    const auto k = KernelSpec::airy();
    std::vector<double> out;
    for (double A : s_grid) {
        const IntervalUnion E({{A, std::numeric_limits<double>::infinity()}});
        require_accuracy(k, E, order, 1e-10);
        const Jet F = single_endpoint_log_det(k, E, order);
        const double R = F.derivative({1}), R1 = F.derivative({2}), R3 = F.derivative({4});
        out.push_back(normalized({R3, -4 * A * R1, 2 * R, 6 * R1 * R1}));
    }
    return out;
}

std::vector<double> pv_residual(double nu, const std::vector<double>& A_grid, int order) {
    const auto k = KernelSpec::bessel(nu);
    std::vector<double> out;
    for (double A : A_grid) {
        if (!(A > 0)) throw Error(ErrorKind::domain, "Painleve V needs A > 0");
        const IntervalUnion E({{0.0, A}});
        require_accuracy(k, E, order, 1e-10);
        const Jet F = single_endpoint_log_det(k, E, order);
        const double F1 = F.derivative({1}), F2 = F.derivative({2}), F3 = F.derivative({3}), F4 = F.derivative({4});
        const double R = -A * F1, R1 = -F1 - A * F2, R2 = -2 * F2 - A * F3, R3 = -3 * F3 - A * F4;
        out.push_back(normalized({A * A * R3, A * R2, (A - nu * nu) * R1, -R / 2, 4 * R * R1, -6 * A * R1 * R1}));
    }
    return out;
}

// A_i -> e^eta A_i + eps: d/deps = A1, d/deta = A3 at 0
AiryBoundaryValues airy_boundary_values(const IntervalUnion& E, int order) {
    const auto sp = make_jet_space(2, 4);
    const Jet eps = Jet::variable(sp, 0, 0.0), eta = Jet::variable(sp, 1, 0.0);
    const Jet stretch = exp(eta);
    const Jet F = fredholm_log_det_jet(KernelSpec::airy(), E, [&](double c) { return stretch * c + eps; }, order);
    return {F.derivative({1, 0}), F.derivative({2, 0}), F.derivative({4, 0}), F.derivative({1, 1})};
}

// A_i -> e^eps A_i / (1 - eta A_i): d/deps = A1 = sum A d/dA, d/deta = A3 = sum A^2 d/dA
BesselBoundaryValues bessel_boundary_values(double nu, const IntervalUnion& E, int order) {
    const auto sp = make_jet_space(2, 4);
    const Jet eps = Jet::variable(sp, 0, 0.0), eta = Jet::variable(sp, 1, 0.0);
    const Jet dil = exp(eps);
    const Jet F = fredholm_log_det_jet(
        KernelSpec::bessel(nu), E, [&](double c) { return dil * c / (1.0 - eta * c); }, order);
    return {F.derivative({1, 0}), F.derivative({2, 0}), F.derivative({3, 0}),
            F.derivative({4, 0}), F.derivative({0, 1}), F.derivative({1, 1})};
}

double airy_pde_residual(const IntervalUnion& E, int order) {
    const auto v = airy_boundary_values(E, order);
    // R = A1 F
    return normalized({v.a1a1a1a1, -4 * v.a3a1, 2 * v.a1, 6 * v.a1a1 * v.a1a1});
}

double bessel_pde_residual(double nu, const IntervalUnion& E, int order) {
    const auto v = bessel_boundary_values(nu, E, order);
    return normalized({v.a1a1a1a1, -2 * v.a1a1a1, (1 - nu * nu) * v.a1a1, v.a3a1, -0.5 * v.a3, -4 * v.a1 * v.a1a1,
                       6 * v.a1a1 * v.a1a1});
}

namespace {

QCoefficients raw_q(EnsembleFamily family, double n, int beta, double a, double b) {
    if (beta != 1 && beta != 2 && beta != 4) throw Error(ErrorKind::unsupported, "beta must be 1, 2 or 4");
    QCoefficients q;
    q.family = family;
    q.n = n;
    q.beta = beta;
    q.a = a;
    q.b = b;
    const double d = beta == 2 ? 0.0 : 1.0, B = beta;
    q.delta = d;
    q.index = beta == 1 ? 2 : 1;
    if (family == EnsembleFamily::gaussian) {
        q.Q = 12 * b * b * n * (n + 1 - 2 / B);
        q.Q2 = 4 * (1 + d) * b * (2 * n + d * (1 - 2 / B));
        q.Q1 = (2 - d) * b * b / B;
    } else {
        if (beta == 1) q.Q = 0.75 * n * (n - 1) * (n + 2 * a) * (n + 2 * a + 1);
        if (beta == 4) q.Q = 1.5 * n * (2 * n + 1) * (2 * n + a) * (2 * n + a - 1);
        // the a-linear pieces of Q2 and Q1 carry (1 - 2/beta): fixed by fitting the
        // beta = 1, 4 equations to exact gap probabilities, and the form the duality needs
        q.Q2 = d * (3 * B * n * n - a * a / B + 6 * a * n + 4 * (1 - 2 / B) * a + 3) + (1 - d) * (1 - a * a);
        q.Q1 = B * n * n + 2 * a * n + (1 - 2 / B) * a;
        q.Q0 = b * (2 - d) * (n + a / B);
        q.Qm1 = b * b / B * (2 - d);
    }
    return q;
}

} // namespace

double duality_gap(EnsembleFamily family, double n, double a, double b) {
    const auto p = raw_q(family, -2 * n, 1, -a / 2, -b / 2), q = raw_q(family, n, 4, a, b);
    return std::max({std::abs(p.Q - q.Q), std::abs(p.Q2 - q.Q2), std::abs(p.Q1 - q.Q1), std::abs(p.Q0 - q.Q0),
                     std::abs(p.Qm1 - q.Qm1)});
}

QCoefficients q_coefficients(EnsembleFamily family, double n, int beta, double a, double b) {
    auto q = raw_q(family, n, beta, a, b);
    const auto d = raw_q(family, n, 4, a, b);
    const double scale = std::max({1.0, std::abs(d.Q), std::abs(d.Q2), std::abs(d.Q1), std::abs(d.Q0), std::abs(d.Qm1)});
    q.duality_holds = duality_gap(family, n, a, b) <= 1e-12 * scale;
    return q;
}

namespace {

void check_beta_n(int beta, int n) {
    if (n < 1) throw Error(ErrorKind::domain, "n must be positive");
    if (beta == 1 && n % 2) throw Error(ErrorKind::unsupported, "beta = 1 equations need even n");
}

double checked_value(const Jet& P) {
    if (!(P.value() >= 1e-12)) throw Error(ErrorKind::underflow, "gap probability below 1e-12");
    return P.value();
}

} // namespace

std::vector<double> beta_ode_residual(EnsembleFamily family, int beta, int n, double a, double b,
                                      const std::vector<double>& x_grid, const GapSupplier& P) {
    check_beta_n(beta, n);
    const auto q = q_coefficients(family, n, beta, a, b);
    const double d = q.delta, B = beta;
    std::vector<double> out;
    for (double x : x_grid) {
        const Jet Pn = P(n, x, 4);
        const double pn = checked_value(Pn);
        double lhs = 0;
        if (d != 0.0) {
            const double lo = n - q.index == 0 ? 1.0 : P(n - q.index, x, 0).value();
            lhs = d * q.Q * (lo * P(n + q.index, x, 0).value() / (pn * pn) - 1);
        }
        const Jet L = log(Pn);
        const double g1 = L.derivative({1}), g2 = L.derivative({2}), g3 = L.derivative({3}), g4 = L.derivative({4});
        if (family == EnsembleFamily::gaussian) {
            out.push_back(normalized({g4, 6 * g2 * g2, (4 * b * b * x * x / B * (d - 2) + q.Q2) * g2,
                                      -4 * b * b * x / B * (d - 2) * g1, -lhs}));
        } else {
            const double f = x * g1, f1 = g1 + x * g2, f2 = 2 * g2 + x * g3, f3 = 3 * g3 + x * g4;
            const double c = b * b / B * (d - 2);
            out.push_back(normalized({x * x * x * f3, -(2 * d - 1) * x * x * f2, 6 * x * x * f1 * f1,
                                      -4 * (d + 1) * x * f * f1, c * x * x * x * f1, 2 * q.Q0 * x * x * f1,
                                      q.Q2 * x * f1, -(2 * d + 1) * x * f1, 3 * d * f * f, -c * x * x * f,
                                      -q.Q0 * x * f, -3 * d * q.Q1 * f, -lhs}));
        }
    }
    return out;
}

std::function<Jet(double)> beta_boundary_flow(EnsembleFamily family) {
    const auto sp = make_jet_space(3, 4);
    const Jet e = Jet::variable(sp, 0, 0.0), h = Jet::variable(sp, 1, 0.0), z = Jet::variable(sp, 2, 0.0);
    if (family == EnsembleFamily::gaussian) {
        // c -> e^h c / (1 - z c) + e
        const Jet s = exp(h);
        return [s, e, z](double c) { return s * c / (1.0 - z * c) + e; };
    }
    // c -> e^e c / ((1 - h c) sqrt(1 - 2 z c^2))
    const Jet s = exp(e);
    return [s, h, z](double c) { return s * c / ((1.0 - h * c) * sqrt(1.0 - 2.0 * c * c * z)); };
}

BetaBoundaryValues beta_boundary_values(const Jet& logP) {
    BetaBoundaryValues v{};
    for (int k = 0; k <= 4; ++k) v.bm1[k] = logP.derivative({k, 0, 0});
    v.b0 = logP.derivative({0, 1, 0});
    v.b0b0 = logP.derivative({0, 2, 0});
    v.b1 = logP.derivative({0, 0, 1});
    v.b1bm1 = logP.derivative({1, 0, 1});
    v.b0bm1 = logP.derivative({1, 1, 0});
    return v;
}

double beta_pde_residual(EnsembleFamily family, int beta, int n, double a, double b, const IntervalUnion& E,
                         const SetGapSupplier& P) {
    check_beta_n(beta, n);
    const auto q = q_coefficients(family, n, beta, a, b);
    const double d = q.delta;
    const auto move = beta_boundary_flow(family);
    const Jet Pn = P(n, E, move);
    const double pn = checked_value(Pn);
    double lhs = 0;
    if (d != 0.0) {
        const double lo = n - q.index == 0 ? 1.0 : P(n - q.index, E, move).value();
        lhs = d * q.Q * (lo * P(n + q.index, E, move).value() / (pn * pn) - 1);
    }
    const auto v = beta_boundary_values(log(Pn));
    const double* m = v.bm1;
    if (family == EnsembleFamily::gaussian) {
        // B_{-1} B_1 = B_1 B_{-1} + 2 B_0
        return normalized({m[4], q.Q2 * m[2], 6 * m[2] * m[2], 12 * q.Q1 * v.b0b0,
                           -16 * q.Q1 * (v.b1bm1 + 2 * v.b0), 24 * q.Q1 * v.b0, -lhs});
    }
    return normalized({m[4], -2 * (d + 1) * m[3], q.Q2 * m[2], 6 * m[2] * m[2], -4 * (d + 1) * m[1] * m[2],
                       -3 * d * q.Q1 * m[1], 3 * d * m[1] * m[1], 3 * q.Qm1 * v.b0b0, -4 * q.Qm1 * v.b1bm1,
                       -2 * q.Qm1 * v.b1, 2 * q.Q0 * v.b0bm1, -q.Q0 * v.b0, -lhs});
}

} // namespace laxlab
