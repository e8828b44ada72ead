#include "laxlab/twotoda.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/tau.hpp"

#include <algorithm>
#include <cmath>

namespace laxlab {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

int highest_time(const std::vector<double>& t) {
    int k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != 0.0) k = static_cast<int>(i) + 1;
    return k;
}

Matrix bimoment_matrix(double c, const IntervalUnion& E1, const IntervalUnion& E2, int N, int order) {
    const double scale = 1.0 / std::sqrt(1.0 - std::min(std::abs(c), 0.99));
    const auto rx = union_rule(E1, order, scale), ry = union_rule(E2, order, scale);
    const int P = static_cast<int>(rx.nodes.size()), Q = static_cast<int>(ry.nodes.size());
    // X(i, p) = x_p^i, W(p, q) = weights * rho, mu = X W Y^T
    Matrix X(N, P), W(P, Q), Y(N, Q);
    for (int p = 0; p < P; ++p) {
        double v = 1.0;
        for (int i = 0; i < N; ++i, v *= rx.nodes[p]) X(i, p) = v;
    }
    for (int q = 0; q < Q; ++q) {
        double v = 1.0;
        for (int j = 0; j < N; ++j, v *= ry.nodes[q]) Y(j, q) = v;
    }
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < Q; ++q) {
            const double x = rx.nodes[p], y = ry.nodes[q];
            W(p, q) = rx.weights[p] * ry.weights[q] * std::exp(-(x * x + y * y) / 2 + c * x * y);
        }
    Matrix m = X * W * Y.transpose();
    for (double v : m.data())
        if (!std::isfinite(v)) throw Error(ErrorKind::divergence, "bimoment overflow");
    return m;
}

// Doolittle m = L U on the leading k x k block, no pivoting.
void lu_nopivot(const Matrix& m, int k, Matrix& L, Matrix& U) {
    L = Matrix(k, k);
    U = Matrix(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double s = m(i, j);
            for (int r = 0; r < i; ++r) s -= L(i, r) * U(r, j);
            U(i, j) = s;
        }
        double row = 0;
        for (int j = 0; j <= i; ++j) row = std::max(row, std::abs(m(i, j)));
        for (int j = 0; j <= i; ++j) row = std::max(row, std::abs(m(j, i)));
        if (!(std::abs(U(i, i)) > 1e-12 * row))
            throw Error(ErrorKind::singular_tau, "tau_" + std::to_string(i + 1) + " vanishes; no bi-orthogonal polynomials");
        L(i, i) = 1.0;
        for (int j = i + 1; j < k; ++j) {
            double s = m(j, i);
            for (int r = 0; r < i; ++r) s -= L(j, r) * U(r, i);
            L(j, i) = s / U(i, i);
        }
    }
}

double poly_eval(const Matrix& coeffs, int n, double z) {
    double v = 0;
    for (int j = n; j >= 0; --j) v = v * z + coeffs(n, j);
    return v;
}

std::array<double, 3> along(const std::array<double, 3>& p, const std::array<double, 3>& v, double s) {
    return {p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]};
}

} // namespace

BiMoments bimoments(double c, const IntervalUnion& E1, const IntervalUnion& E2, int N, int order) {
    if (N < 1) throw Error(ErrorKind::dimension, "bimoment size must be positive");
    if (E1.empty() || E2.empty()) throw Error(ErrorKind::empty_domain, "bimoments over an empty set");
    if (!(std::abs(c) < 1) && !(E1.bounded() && E2.bounded()))
        throw Error(ErrorKind::divergence, "coupled gaussian needs |c| < 1 on unbounded sets");
    BiMoments b;
    b.m = bimoment_matrix(c, E1, E2, N, order);
    b.c = c;
    b.E1 = E1;
    b.E2 = E2;
    return b;
}

double bimoment_quadrature_error(double c, const IntervalUnion& E1, const IntervalUnion& E2, int N, int order) {
    const Matrix a = bimoment_matrix(c, E1, E2, N, order), b = bimoment_matrix(c, E1, E2, N, 2 * order);
    double diff = 0, big = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
        big = std::max(big, std::abs(b.data()[i]));
    }
    return big > 0 ? diff / big : 0.0;
}

BiMoments bimoments_from_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension, "bimoment matrix must be square");
    BiMoments b;
    b.m = m;
    return b;
}

BiMoments evolve_bimoments(const BiMoments& m0, const std::vector<double>& t, const std::vector<double>& s,
                           int size_out) {
    const int N = m0.size();
    if (size_out < 0) size_out = N;
    if (size_out > N) throw Error(ErrorKind::depth, "requested more rows than available");
    std::vector<double> ms(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) ms[i] = -s[i];
    const auto ct = exp_series(t, N - 1), cs = exp_series(ms, N - 1);
    Matrix A(size_out, N), B(size_out, N), Aabs(size_out, N), Babs(size_out, N), Ahead(size_out, N),
        Bhead(size_out, N);
    for (int i = 0; i < size_out; ++i)
        for (int k = 0; i + k < N; ++k) {
            A(i, i + k) = ct[k];
            B(i, i + k) = cs[k];
            Aabs(i, i + k) = std::abs(ct[k]);
            Babs(i, i + k) = std::abs(cs[k]);
            if (i + k < N - 2) {
                Ahead(i, i + k) = std::abs(ct[k]);
                Bhead(i, i + k) = std::abs(cs[k]);
            }
        }
    if (size_out < N && (highest_time(t) > 0 || highest_time(s) > 0)) {
        // the last two moment rows and columns stand in for everything cut off
        Matrix mabs = m0.m;
        for (double& v : mabs.data()) v = std::abs(v);
        const Matrix full = Aabs * mabs * Babs.transpose(), head = Ahead * mabs * Bhead.transpose();
        for (int i = 0; i < size_out; ++i)
            for (int j = 0; j < size_out; ++j)
                if (full(i, j) - head(i, j) > 1e-13 * full(i, j))
                    throw Error(ErrorKind::depth, "time series truncation not negligible in bimoment evolution");
    }
    BiMoments r = m0;
    r.m = A * m0.m * B.transpose();
    return r;
}

std::vector<double> tau2_table(const BiMoments& m, int nmax) {
    if (nmax > m.size()) throw Error(ErrorKind::depth, "tau table needs a larger bimoment matrix");
    std::vector<double> tau{1.0};
    for (int n = 1; n <= nmax; ++n) tau.push_back(determinant_of(m.m.block(0, 0, n, n).data(), n));
    return tau;
}

BiOrthogonal biorthogonalize(const BiMoments& m, int n) {
    if (n + 1 > m.size()) throw Error(ErrorKind::depth, "bi-orthogonal polynomials need a larger bimoment matrix");
    Matrix L, U;
    lu_nopivot(m.m, n + 1, L, U);
    BiOrthogonal r;
    r.p1 = lower_inverse(L);
    Matrix L2(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j) L2(i, j) = U(j, i) / U(j, j);
    r.p2 = lower_inverse(L2);
    for (int i = 0; i <= n; ++i) r.h.push_back(U(i, i));
    return r;
}

double biorthopoly_eval(const BiMoments& m, int which, int n, double z) {
    if (which != 1 && which != 2) throw Error(ErrorKind::domain, "which must be 1 or 2");
    if (n < 0) throw Error(ErrorKind::dimension, "negative degree");
    if (n == 0) return 1.0;
    const auto b = biorthogonalize(m, n);
    return poly_eval(which == 1 ? b.p1 : b.p2, n, z);
}

double cd_kernel(const BiMoments& m, int n, double y, double z) {
    if (n < 1) throw Error(ErrorKind::dimension, "kernel needs n >= 1");
    const auto b = biorthogonalize(m, n - 1);
    double k = 0;
    for (int j = 0; j < n; ++j) k += poly_eval(b.p1, j, y) * poly_eval(b.p2, j, z) / b.h[j];
    return k;
}

Jet tau2_jet(const BiMoments& m, int n, const std::vector<int>& t_times, const std::vector<int>& s_times, int degree) {
    const int nt = static_cast<int>(t_times.size());
    auto sp = make_jet_space(nt + static_cast<int>(s_times.size()), degree);
    if (n == 0) return Jet(sp, 1.0);
    std::vector<int> rs(sp->size()), cs(sp->size());
    std::vector<double> coef(sp->size());
    int reach = 0;
    for (int q = 0; q < sp->size(); ++q) {
        const auto& e = sp->exponent(q);
        int r = 0, c = 0, sgn = 0;
        double f = 1.0;
        for (int v = 0; v < sp->nvar(); ++v) {
            f *= factorial(e[v]);
            if (v < nt) {
                r += t_times[v] * e[v];
            } else {
                c += s_times[v - nt] * e[v];
                sgn += e[v];
            }
        }
        rs[q] = r;
        cs[q] = c;
        coef[q] = (sgn % 2 ? -1.0 : 1.0) / f;
        reach = std::max({reach, r, c});
    }
    if (n + reach > m.size()) throw Error(ErrorKind::depth, "tau jet needs a larger bimoment matrix");
    std::vector<Jet> a;
    a.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet e(sp, 0.0);
            for (int q = 0; q < sp->size(); ++q) e.coeff(q) = m.m(i + rs[q], j + cs[q]) * coef[q];
            a.push_back(e);
        }
    return determinant_of(a, n);
}

WronskianResult wronskian_identity_residual(const BiMoments& m, int n) {
    if (n < 1) throw Error(ErrorKind::dimension, "n must be positive");
    // variables (t1, t2, s1, s2)
    auto logtau = [&](int k, int degree) {
        const Jet tau = tau2_jet(m, k, {1, 2}, {1, 2}, degree);
        if (tau.value() == 0.0) throw Error(ErrorKind::singular_tau, "tau_" + std::to_string(k) + " vanishes");
        return tau.value() > 0 ? log(tau) : log(-tau);
    };
    const Jet L = logtau(n, 3), up = logtau(n + 1, 1), down = logtau(n - 1, 1);
    const double f = L.derivative({1, 0, 0, 1}), g = L.derivative({1, 0, 1, 0}), h = L.derivative({0, 1, 1, 0});
    auto rel = [](double x, double y) {
        const double s = std::max(std::abs(x), std::abs(y));
        return s > 0 ? std::abs(x - y) / s : 0.0;
    };
    WronskianResult r{};
    r.denominator = std::abs(g);
    r.small_denominator = r.denominator < 1e-6;
    r.s_identity = rel(-(up.derivative({0, 0, 1, 0}) - down.derivative({0, 0, 1, 0})), f / g);
    r.t_identity = rel(up.derivative({1, 0, 0, 0}) - down.derivative({1, 0, 0, 0}), h / g);
    const double terms[4] = {L.derivative({2, 0, 0, 1}) * g, -f * L.derivative({2, 0, 1, 0}),
                             L.derivative({0, 1, 2, 0}) * g, -h * L.derivative({1, 0, 2, 0})};
    double sum = 0, big = 0;
    for (double v : terms) {
        sum += v;
        big = std::max(big, std::abs(v));
    }
    r.wronskian = big > 0 ? std::abs(sum) / big : 0.0;
    return r;
}

double bimoment_kp_residual(const BiMoments& m, int n, int which) {
    if (which != 1 && which != 2) throw Error(ErrorKind::domain, "which must be 1 or 2");
    const std::vector<int> times{1, 2, 3};
    const Jet tau = which == 1 ? tau2_jet(m, n, times, {}, 4) : tau2_jet(m, n, {}, times, 4);
    if (tau.value() == 0.0) throw Error(ErrorKind::singular_tau, "tau vanishes");
    const Jet f = tau.value() > 0 ? log(tau) : log(-tau);
    const double f11 = f.derivative({2, 0, 0});
    const double terms[4] = {f.derivative({4, 0, 0}), 3.0 * f.derivative({0, 2, 0}), -4.0 * f.derivative({1, 0, 1}),
                             6.0 * f11 * f11};
    double sum = 0, big = 0;
    for (double v : terms) {
        sum += v;
        big = std::max(big, std::abs(v));
    }
    return big > 0 ? std::abs(sum) / big : 0.0;
}

Field3 CoupledOperators::A1() {
    return [](const std::array<double, 3>& p) {
        const double d = p[2] * p[2] - 1;
        return std::array<double, 3>{1 / d, p[2] / d, 0.0};
    };
}
Field3 CoupledOperators::B1() {
    return [](const std::array<double, 3>& p) {
        const double d = 1 - p[2] * p[2];
        return std::array<double, 3>{p[2] / d, 1 / d, 0.0};
    };
}
Field3 CoupledOperators::A2() {
    return [](const std::array<double, 3>& p) { return std::array<double, 3>{p[0], 0.0, -p[2]}; };
}
Field3 CoupledOperators::B2() {
    return [](const std::array<double, 3>& p) { return std::array<double, 3>{0.0, p[1], -p[2]}; };
}

FdFunction fd_apply(const Field3& X, const FdFunction& f, double h) {
    FdFunction out;
    out.noise = 3 * f.noise / h;
    out.f = [X, g = f.f, h](const std::array<double, 3>& p) {
        const auto v = X(p);
        if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) return 0.0;
        auto central = [&](double s) { return (g(along(p, v, s)) - g(along(p, v, -s))) / (2 * s); };
        return (4 * central(h / 2) - central(h)) / 3;
    };
    return out;
}

double fd_bracket(const Field3& X, const Field3& Y, const Function3& f, const std::array<double, 3>& p, double h) {
    const FdFunction F{f, 0.0};
    return fd_apply(X, fd_apply(Y, F, h), h).f(p) - fd_apply(Y, fd_apply(X, F, h), h).f(p);
}

double coupled_gap_probability(int n, double a, double b, double c, int order) {
    if (n < 1) throw Error(ErrorKind::dimension, "n must be positive");
    if (!(std::abs(c) < 1)) throw Error(ErrorKind::divergence, "coupled gaussian needs |c| < 1");
    const double inf = std::numeric_limits<double>::infinity();
    const IntervalUnion R({{-inf, inf}});
    const auto E = bimoments(c, IntervalUnion({{-inf, a}}), IntervalUnion({{-inf, b}}), n, order);
    const auto F = bimoments(c, R, R, n, order);
    return tau2_table(E, n)[n] / tau2_table(F, n)[n];
}

CoupledPdeResult coupled_pde_residual(double c, double a, double b, int n) {
    if (!(std::abs(c) < 1) || c == 0.0) throw Error(ErrorKind::domain, "need 0 < |c| < 1");
    if (n < 1 || n > 2) throw Error(ErrorKind::unsupported, "coupled PDE check covers n = 1, 2");
    const double inf = std::numeric_limits<double>::infinity();
    // noise of log P from the quadrature; every FD level multiplies it by about 3/h
    const double q = bimoment_quadrature_error(c, IntervalUnion({{-inf, a}}), IntervalUnion({{-inf, b}}), n);
    const double h = 1e-2;
    FdFunction F;
    F.f = [n](const std::array<double, 3>& p) { return std::log(coupled_gap_probability(n, p[0], p[1], p[2])) / n; };
    F.noise = std::max(q, 1e-15);
    const auto A1 = CoupledOperators::A1(), B1 = CoupledOperators::B1(), A2 = CoupledOperators::A2(),
               B2 = CoupledOperators::B2();
    const std::array<double, 3> p{a, b, c};
    const double shift = c / (c * c - 1);

    const auto A1F = fd_apply(A1, F, h), B1F = fd_apply(B1, F, h);
    const auto B2A1F = fd_apply(B2, A1F, h), B1A1F = fd_apply(B1, A1F, h);
    const auto A2B1F = fd_apply(A2, B1F, h), A1B1F = fd_apply(A1, B1F, h);
    const auto dB2A1F = fd_apply(A1, B2A1F, h), dB1A1F = fd_apply(A1, B1A1F, h);
    const auto dA2B1F = fd_apply(B1, A2B1F, h), dA1B1F = fd_apply(B1, A1B1F, h);
    if (dB2A1F.noise > 1e-6) throw Error(ErrorKind::precision, "quadrature noise too large for third differences");

    const double f1 = B2A1F.f(p), g1 = B1A1F.f(p) + shift;
    const double f2 = A2B1F.f(p), g2 = A1B1F.f(p) + shift;
    const double t1 = g1 * dB2A1F.f(p), t2 = f1 * dB1A1F.f(p), t3 = g2 * dA2B1F.f(p), t4 = f2 * dA1B1F.f(p);
    CoupledPdeResult r{};
    r.lhs = t1 - t2;
    r.rhs = t3 - t4;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    r.signed_residual = scale > 0 ? (r.lhs - r.rhs) / scale : 0.0;
    r.residual = std::abs(r.signed_residual);
    return r;
}

} // namespace laxlab
