#include "laxlab/pfaff.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/tau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace laxlab {

namespace {

IntervalUnion clip_above(const IntervalUnion& e, double y) {
    std::vector<Interval> p;
    for (const auto& q : e.pieces()) {
        const double hi = std::min(q.hi, y);
        if (hi > q.lo) p.push_back({q.lo, hi});
    }
    return IntervalUnion(p);
}

IntervalUnion clip_below(const IntervalUnion& e, double y) {
    std::vector<Interval> p;
    for (const auto& q : e.pieces()) {
        const double lo = std::max(q.lo, y);
        if (q.hi > lo) p.push_back({lo, q.hi});
    }
    return IntervalUnion(p);
}

// beta = 1 matrix by nested quadrature: mu_ij = sum_k W_k y_k^i (G_j(y_k) ... ) using antiderivatives
Matrix beta1_matrix(const WeightSpec& w, const IntervalUnion& e, int size, int order, Matrix* scale) {
    const QuadratureRule outer = weighted_rule(w, e, order);
    const int n = static_cast<int>(outer.nodes.size());
    std::vector<double> total(size, 0.0), total_abs(size, 0.0);
    for (int k = 0; k < n; ++k) {
        double p = outer.weights[k];
        for (int j = 0; j < size; ++j) {
            total[j] += p;
            total_abs[j] += std::abs(p);
            p *= outer.nodes[k];
        }
    }
    const double pivot = w.family == WeightFamily::laguerre ? (w.a + 1.0) / w.b : 0.0;
    Matrix m(size, size);
    if (scale) *scale = Matrix(size, size);
    std::vector<double> g(size);
    for (int k = 0; k < n; ++k) {
        const double y = outer.nodes[k];
        std::fill(g.begin(), g.end(), 0.0);
        // integrate over the side of y away from the bulk of the weight, then complement
        const bool upper = y > pivot;
        const IntervalUnion part = upper ? clip_below(e, y) : clip_above(e, y);
        if (!part.empty()) {
            const QuadratureRule inner = weighted_rule(w, part, order);
            for (std::size_t q = 0; q < inner.nodes.size(); ++q) {
                double p = inner.weights[q];
                for (int j = 0; j < size; ++j) {
                    g[j] += p;
                    p *= inner.nodes[q];
                }
            }
        }
        if (upper)
            for (int j = 0; j < size; ++j) g[j] = total[j] - g[j];
        // sign(z - y): +1 above y, -1 below
        double yi = outer.weights[k];
        for (int i = 0; i < size; ++i) {
            for (int j = 0; j < size; ++j) {
                m(i, j) += yi * (total[j] - 2.0 * g[j]);
                if (scale) (*scale)(i, j) += std::abs(yi) * total_abs[j];
            }
            yi *= y;
        }
    }
    // antisymmetrize away the quadrature asymmetry
    return 0.5 * (m - m.transpose());
}

std::vector<Jet> jet_exp_series(const JetSpacePtr& sp, const std::vector<int>& times, int depth) {
    // j c_j = sum_k k d_k c_{j-k}
    std::vector<Jet> c;
    c.emplace_back(sp, 1.0);
    for (int j = 1; j <= depth; ++j) {
        Jet s(sp, 0.0);
        for (std::size_t v = 0; v < times.size(); ++v) {
            const int k = times[v];
            if (k > j) continue;
            s += (static_cast<double>(k) * Jet::variable(sp, static_cast<int>(v), 0.0)) * c[j - k];
        }
        c.push_back(s / static_cast<double>(j));
    }
    return c;
}

int highest_time(const std::vector<double>& t) {
    int k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != 0.0) k = static_cast<int>(i) + 1;
    return k;
}

int block(int i) { return i / 2; }

} // namespace

SkewMoments skew_inner_products(const WeightSpec& w, const IntervalUnion& e, int alpha, int size, int order) {
    if (alpha != -1 && alpha != 1) throw Error(ErrorKind::domain, "alpha must be -1 or +1");
    if (size < 1) throw Error(ErrorKind::dimension, "skew moment size must be positive");
    if (e.empty()) throw Error(ErrorKind::empty_domain, "skew moments over an empty set");
    SkewMoments s;
    s.alpha = alpha;
    s.w = w;
    s.E = e;
    if (alpha == 1) {
        const auto h = hankel_moments(w, e, std::max(0, 2 * size - 3), order);
        s.m = Matrix(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                if (i != j) s.m(i, j) = (j - i) * h.mu[i + j - 1];
        return s;
    }
    if (order > 0) {
        s.m = beta1_matrix(w, e, size, order, nullptr);
        return s;
    }
    Matrix prev, scale;
    for (int n = 32; n <= 256; n *= 2) {
        Matrix m = beta1_matrix(w, e, size, n, &scale);
        for (double v : m.data())
            if (!std::isfinite(v)) throw Error(ErrorKind::divergence, "skew moment overflow");
        if (prev.rows() == size) {
            bool ok = true;
            for (int i = 0; i < size && ok; ++i)
                for (int j = 0; j < size; ++j)
                    if (std::abs(m(i, j) - prev(i, j)) > 1e-12 * scale(i, j)) {
                        ok = false;
                        break;
                    }
            if (ok) {
                s.m = m;
                return s;
            }
        }
        prev = m;
    }
    throw Error(ErrorKind::precision, "skew moment quadrature did not settle by order 256");
}

SkewMoments skew_from_matrix(const Matrix& m) {
    if (!is_skew(m)) throw Error(ErrorKind::symmetry, "skew moments must be skew-symmetric");
    SkewMoments s;
    s.m = m;
    s.w.family = WeightFamily::custom;
    return s;
}

double skew_inner(const WeightSpec& w, const IntervalUnion& e, int alpha, const std::function<double(double)>& f,
                  const std::function<double(double)>& fp, const std::function<double(double)>& g,
                  const std::function<double(double)>& gp, int order) {
    const QuadratureRule outer = weighted_rule(w, e, order);
    double s = 0.0;
    if (alpha == 1) {
        for (std::size_t k = 0; k < outer.nodes.size(); ++k) {
            const double y = outer.nodes[k];
            s += outer.weights[k] * (f(y) * gp(y) - fp(y) * g(y));
        }
        return s;
    }
    // <f,g> = int f(y) rho(y) [int_{z>y} g rho - int_{z<y} g rho] dy
    const double total = outer.integrate(g);
    for (std::size_t k = 0; k < outer.nodes.size(); ++k) {
        const double y = outer.nodes[k];
        const IntervalUnion below = clip_above(e, y);
        const double lower = below.empty() ? 0.0 : weighted_rule(w, below, order).integrate(g);
        s += outer.weights[k] * f(y) * (total - 2.0 * lower);
    }
    return s;
}

SkewMoments evolve_skew(const SkewMoments& m0, const std::vector<double>& t, int size_out) {
    const int K = highest_time(t);
    const int S = m0.size();
    if (size_out < 0) size_out = S;
    if (size_out > S) throw Error(ErrorKind::depth, "requested more rows than available");
    if (K == 0) {
        SkewMoments r = m0;
        r.m = m0.m.block(0, 0, size_out, size_out);
        return r;
    }
    const int J = S - 1;
    const auto c = exp_series(t, J);
    Matrix C(size_out, S), Cabs(size_out, S), Chead(size_out, S);
    const int keep = S - size_out;
    for (int i = 0; i < size_out; ++i)
        for (int s = 0; i + s < S; ++s) {
            C(i, i + s) = c[s];
            Cabs(i, i + s) = std::abs(c[s]);
            if (i + s < S - 2) Chead(i, i + s) = std::abs(c[s]);
        }
    if (keep > 0) {
        // the neglected rows beyond S must not matter for the rows kept
        Matrix mabs = m0.m;
        for (double& v : mabs.data()) v = std::abs(v);
        const Matrix full = Cabs * mabs * Cabs.transpose();
        const Matrix head = Chead * mabs * Chead.transpose();
        for (int i = 0; i < size_out; ++i)
            for (int j = 0; j < size_out; ++j)
                if (full(i, j) - head(i, j) > 1e-13 * full(i, j))
                    throw Error(ErrorKind::depth, "time series truncation not negligible in skew evolution");
    }
    SkewMoments r = m0;
    r.m = C * m0.m * C.transpose();
    r.m = 0.5 * (r.m - r.m.transpose());
    return r;
}

std::vector<double> pfaff_tau_table(const SkewMoments& m, int jmax) {
    if (2 * jmax > m.size()) throw Error(ErrorKind::depth, "Pfaffian table needs a larger moment matrix");
    std::vector<double> tau{1.0};
    for (int j = 1; j <= jmax; ++j) tau.push_back(pfaffian_of(m.m.block(0, 0, 2 * j, 2 * j).data(), 2 * j));
    return tau;
}

Jet pfaff_tau_jet(const SkewMoments& m, int n2, const std::vector<int>& times, int degree) {
    auto sp = make_jet_space(static_cast<int>(times.size()), degree);
    int depth = 0;
    for (int k : times) depth = std::max(depth, k * degree);
    if (n2 + depth > m.size()) throw Error(ErrorKind::depth, "Pfaffian jet needs a larger moment matrix");
    if (n2 == 0) return Jet(sp, 1.0);
    const auto c = jet_exp_series(sp, times, depth);
    // B = C m (n2 x (n2+depth)), then B C^T
    const int W = n2 + depth;
    std::vector<Jet> b(static_cast<std::size_t>(n2) * W, Jet(sp, 0.0));
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < W; ++j) {
            Jet acc(sp, 0.0);
            for (int s = 0; s <= depth && i + s < W; ++s) acc += c[s] * m.m(i + s, j);
            b[static_cast<std::size_t>(i) * W + j] = acc;
        }
    std::vector<Jet> a(static_cast<std::size_t>(n2) * n2, Jet(sp, 0.0));
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j) {
            Jet acc(sp, 0.0);
            for (int r = 0; r <= depth && j + r < W; ++r) acc += b[static_cast<std::size_t>(i) * W + j + r] * c[r];
            a[static_cast<std::size_t>(i) * n2 + j] = acc;
            a[static_cast<std::size_t>(j) * n2 + i] = -acc;
        }
    return pfaffian_of(a, n2);
}

Matrix pfaff_lax_from_q(const Matrix& q) { return q * shift_matrix(q.rows()) * lower_inverse(q); }

Matrix pfaff_lax(const SkewMoments& m) { return pfaff_lax_from_q(skew_borel(m.m)); }

Matrix pfaff_p_plus(const Matrix& a) {
    const int n = a.rows();
    if (n % 2) throw Error(ErrorKind::dimension, "P+ needs even size");
    const Matrix j = symplectic_j(n);
    Matrix lower(n, n), zero(n, n), upper(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (block(r) > block(c)) lower(r, c) = a(r, c);
            else if (block(r) == block(c)) zero(r, c) = a(r, c);
            else upper(r, c) = a(r, c);
        }
    auto inv = [&](const Matrix& x) { return j * x.transpose() * j; };
    return (lower - inv(upper)) + 0.5 * (zero - inv(zero));
}

Matrix pfaff_p_minus(const Matrix& a) { return a - pfaff_p_plus(a); }

PfaffState pfaff_ode_flow(const Matrix& l0, const Matrix& q0, int k, double t_end, double step) {
    if (!(step > 0)) throw Error(ErrorKind::domain, "step must be positive");
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t_end) / step - 1e-9)));
    const double h = t_end / steps;
    PfaffState s{l0, q0};
    const double scale = std::max(1.0, l0.max_abs());
    auto rhs = [k](const Matrix& l, const Matrix& q) {
        const Matrix p = pfaff_p_plus(matrix_power(l, k));
        return std::pair<Matrix, Matrix>{commutator(-1.0 * p, l), -1.0 * (p * q)};
    };
    for (int i = 0; i < steps; ++i) {
        const auto k1 = rhs(s.L, s.Q);
        const auto k2 = rhs(s.L + (0.5 * h) * k1.first, s.Q + (0.5 * h) * k1.second);
        const auto k3 = rhs(s.L + (0.5 * h) * k2.first, s.Q + (0.5 * h) * k2.second);
        const auto k4 = rhs(s.L + h * k3.first, s.Q + h * k3.second);
        s.L += (h / 6.0) * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        s.Q += (h / 6.0) * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
        const double big = s.L.max_abs();
        if (!std::isfinite(big) || big > 1e8 * scale) throw Error(ErrorKind::stability, "Pfaff flow blew up");
    }
    return s;
}

double pfaff_route_difference(const SkewMoments& m0, int k, double t, double step, int interior) {
    std::vector<double> tv(k, 0.0);
    tv[k - 1] = t;
    const Matrix lt = pfaff_lax(evolve_skew(m0, tv));
    const Matrix q0 = skew_borel(m0.m);
    const PfaffState s = pfaff_ode_flow(pfaff_lax_from_q(q0), q0, k, t, step);
    return max_abs_diff(lt.block(0, 0, interior, interior), s.L.block(0, 0, interior, interior));
}

double skew_orthopoly_eval(const SkewMoments& m, int n, double z) {
    const int S = n + 1 + ((n + 1) % 2);
    if (S > m.size()) throw Error(ErrorKind::depth, "skew polynomial needs a larger moment matrix");
    const Matrix q = skew_borel(m.m.block(0, 0, S, S));
    double s = 0.0, zp = 1.0;
    for (int j = 0; j <= n; ++j) {
        s += q(n, j) * zp;
        zp *= z;
    }
    return s;
}

namespace {

// pf of the leading n2 block of (I - L/z) M (I - L^T/z), M = m or its t1 jet
Jet shifted_pf(const SkewMoments& m, int n2, double z, bool with_t1) {
    auto sp = make_jet_space(1, with_t1 ? 1 : 0);
    const int W = n2 + 2;
    if (W > m.size()) throw Error(ErrorKind::depth, "skew polynomial needs a larger moment matrix");
    auto entry = [&](int i, int j) {
        // m + d (L m + m L^T)
        Jet e(sp, m.m(i, j));
        if (with_t1) {
            double d = 0.0;
            if (i + 1 < m.size()) d += m.m(i + 1, j);
            if (j + 1 < m.size()) d += m.m(i, j + 1);
            e += Jet::variable(sp, 0, 0.0) * d;
        }
        return e;
    };
    std::vector<Jet> a(static_cast<std::size_t>(n2) * n2, Jet(sp, 0.0));
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) {
            if (i == j) continue;
            a[static_cast<std::size_t>(i) * n2 + j] = entry(i, j) - entry(i + 1, j) / z - entry(i, j + 1) / z +
                                                      entry(i + 1, j + 1) / (z * z);
        }
    return pfaffian_of(a, n2);
}

} // namespace

double skew_orthopoly_tau(const SkewMoments& m, int n, double z) {
    const int j = n / 2;
    const auto tau = pfaff_tau_table(m, j + 1);
    if (tau[j] == 0.0 || tau[j + 1] == 0.0) throw Error(ErrorKind::singular_tau, "vanishing Pfaffian tau");
    const double h = tau[j + 1] / tau[j];
    const double pre = std::pow(z, 2 * j) / std::sqrt(h) / tau[j];
    if (n % 2 == 0) {
        if (j == 0) return 1.0 / std::sqrt(h);
        return pre * shifted_pf(m, 2 * j, z, false).value();
    }
    if (j == 0) return z / std::sqrt(h);
    const Jet p = shifted_pf(m, 2 * j, z, true);
    return pre * (z * p.value() + p.derivative({1}));
}

PfaffKpResult pfaffkp_residual(const SkewMoments& m, int n) {
    if (n < 2 || n % 2) throw Error(ErrorKind::dimension, "Pfaff-KP needs even n >= 2");
    const Jet tau = pfaff_tau_jet(m, n, {1, 2, 3}, 4);
    const auto table = pfaff_tau_table(m, n / 2 + 1);
    const double tn = tau.value();
    double bound = 1.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += m.m(i, j) * m.m(i, j);
        bound *= std::sqrt(s);
    }
    if (!(std::abs(tn) > 1e-13 * std::sqrt(bound)))
        throw Error(ErrorKind::singular_tau, "tau_" + std::to_string(n) + " vanishes to working precision");
    const Jet f = tn > 0 ? log(tau) : log(-tau);
    const double f11 = f.derivative({2, 0, 0});
    PfaffKpResult r{};
    r.terms = {f.derivative({4, 0, 0}), 3.0 * f.derivative({0, 2, 0}), -4.0 * f.derivative({1, 0, 1}),
               6.0 * f11 * f11, -12.0 * table[n / 2 - 1] * table[n / 2 + 1] / (tn * tn)};
    double big = 0.0, s = 0.0;
    for (double v : r.terms) {
        big = std::max(big, std::abs(v));
        s += v;
    }
    r.residual = big > 0 ? s / big : 0.0;
    return r;
}

} // namespace laxlab
