#include "laxlab/tau.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace laxlab {

namespace {

std::vector<double> moments_with_rule(const QuadratureRule& r, int M, std::vector<double>* absolute) {
    std::vector<double> mu(M + 1, 0.0);
    if (absolute) absolute->assign(M + 1, 0.0);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        double p = r.weights[i];
        for (int m = 0; m <= M; ++m) {
            mu[m] += p;
            if (absolute) (*absolute)[m] += std::abs(p);
            p *= r.nodes[i];
        }
    }
    return mu;
}

int highest_time(const std::vector<double>& t) {
    int k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != 0.0) k = static_cast<int>(i) + 1;
    return k;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

HankelMoments hankel_moments(const WeightSpec& w, const IntervalUnion& e, int M, int order) {
    if (M < 0) throw Error(ErrorKind::dimension, "negative moment count");
    if (e.empty()) throw Error(ErrorKind::empty_domain, "moments over an empty set");
    HankelMoments out;
    out.E = e;
    if (order > 0) {
        out.mu = moments_with_rule(weighted_rule(w, e, order), M, nullptr);
        return out;
    }
    std::vector<double> prev, abs_mu;
    for (int n = 32; n <= 1024; n *= 2) {
        auto mu = moments_with_rule(weighted_rule(w, e, n), M, &abs_mu);
        for (double v : mu)
            if (!std::isfinite(v)) throw Error(ErrorKind::divergence, "moment overflow");
        if (!prev.empty()) {
            bool ok = true;
            for (int m = 0; m <= M; ++m)
                if (std::abs(mu[m] - prev[m]) > 1e-12 * abs_mu[m]) ok = false;
            if (ok) {
                out.mu = mu;
                return out;
            }
        }
        prev = mu;
    }
    throw Error(ErrorKind::precision, "moment quadrature did not settle by order 1024");
}

HankelMoments moments_from_sequence(std::vector<double> mu) {
    HankelMoments m;
    m.mu = std::move(mu);
    return m;
}

HankelMoments discrete_moments(const std::vector<double>& x, const std::vector<double>& w, int M) {
    if (x.size() != w.size()) throw Error(ErrorKind::dimension, "node/weight size mismatch");
    QuadratureRule r{x, w};
    return moments_from_sequence(moments_with_rule(r, M, nullptr));
}

std::vector<double> exp_series(const std::vector<double>& t, int depth) {
    // c' = (sum k t_k z^{k-1}) c  =>  j c_j = sum_k k t_k c_{j-k}
    std::vector<double> c(depth + 1, 0.0);
    c[0] = 1.0;
    for (int j = 1; j <= depth; ++j) {
        double s = 0.0;
        for (int k = 1; k <= std::min<int>(j, static_cast<int>(t.size())); ++k) s += k * t[k - 1] * c[j - k];
        c[j] = s / j;
    }
    return c;
}

HankelMoments evolve_hankel(const HankelMoments& m0, const std::vector<double>& t, int m_out) {
    const int K = highest_time(t);
    const int M = m0.max_index();
    if (K == 0) {
        HankelMoments r = m0;
        if (m_out >= 0) {
            if (m_out > M) throw Error(ErrorKind::depth, "requested more moments than available");
            r.mu.resize(m_out + 1);
        }
        return r;
    }
    if (m_out < 0) m_out = M - 12 * K;
    const int J = M - m_out;
    if (m_out < 0 || J < 1) throw Error(ErrorKind::depth, "not enough moments to evolve");
    const auto c = exp_series(t, J);
    HankelMoments r;
    r.E = m0.E;
    r.mu.assign(m_out + 1, 0.0);
    for (int m = 0; m <= m_out; ++m) {
        double s = 0.0, sabs = 0.0;
        for (int j = 0; j <= J; ++j) {
            const double v = c[j] * m0.mu[m + j];
            s += v;
            sabs += std::abs(v);
        }
        double tail = std::abs(c[J] * m0.mu[m + J]);
        if (J >= 1) tail += std::abs(c[J - 1] * m0.mu[m + J - 1]);
        if (!(tail <= 1e-13 * sabs) && sabs != 0.0)
            throw Error(ErrorKind::depth, "time series truncation not negligible at moment " + std::to_string(m));
        r.mu[m] = s;
    }
    return r;
}

Matrix hankel_matrix(const HankelMoments& m, int n, int shift) {
    if (2 * n - 2 + shift > m.max_index()) throw Error(ErrorKind::depth, "Hankel matrix needs more moments");
    Matrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = m.mu[i + j + shift];
    return h;
}

void require_regular_tau(const HankelMoments& m, int n, double tau) {
    const Matrix h = hankel_matrix(m, n);
    double bound = 1.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += h(i, j) * h(i, j);
        bound *= std::sqrt(s);
    }
    if (!(std::abs(tau) > 1e-13 * bound))
        throw Error(ErrorKind::singular_tau, "tau_" + std::to_string(n) + " vanishes to working precision");
}

std::vector<double> tau_table(const HankelMoments& m, int nmax) {
    if (2 * nmax - 2 > m.max_index()) throw Error(ErrorKind::depth, "tau table needs more moments");
    std::vector<double> tau{1.0};
    for (int n = 1; n <= nmax; ++n) tau.push_back(lu_determinant(hankel_matrix(m, n)));
    return tau;
}

Jet tau_jet(const HankelMoments& m, int n, const std::vector<int>& times, int degree) {
    auto sp = make_jet_space(static_cast<int>(times.size()), degree);
    int max_shift = 0;
    for (int k : times) max_shift = std::max(max_shift, k * degree);
    if (2 * n - 2 + max_shift > m.max_index()) throw Error(ErrorKind::depth, "tau jet needs more moments");
    // Taylor coefficient of delta^alpha is mu_{i+j+shift(alpha)} / alpha!
    std::vector<int> shift(sp->size());
    std::vector<double> inv_fact(sp->size());
    for (int q = 0; q < sp->size(); ++q) {
        int s = 0;
        double f = 1.0;
        for (std::size_t v = 0; v < times.size(); ++v) {
            s += times[v] * sp->exponent(q)[v];
            f *= factorial(sp->exponent(q)[v]);
        }
        shift[q] = s;
        inv_fact[q] = 1.0 / f;
    }
    std::vector<Jet> a;
    a.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet e(sp, 0.0);
            for (int q = 0; q < sp->size(); ++q) e.coeff(q) = m.mu[i + j + shift[q]] * inv_fact[q];
            a.push_back(e);
        }
    if (n == 0) return Jet(sp, 1.0);
    return determinant_of(a, n);
}

double dlog_tau(const HankelMoments& m, int n, const std::vector<int>& alpha) {
    std::vector<int> times, e;
    int degree = 0;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] > 0) {
            times.push_back(static_cast<int>(k) + 1);
            e.push_back(alpha[k]);
            degree += alpha[k];
        }
    if (degree > 4) throw Error(ErrorKind::unsupported, "derivative order above 4");
    const Jet tau = tau_jet(m, n, times, degree);
    require_regular_tau(m, n, tau.value());
    if (degree == 0) return std::log(tau.value());
    if (tau.value() < 0) return log(-tau).derivative(e);
    return log(tau).derivative(e);
}

double dlog_tau_trace(const HankelMoments& m, int n, int k) {
    const Matrix h = hankel_matrix(m, n);
    const double tau = lu_determinant(h);
    require_regular_tau(m, n, tau);
    // d mu_{ij}/dt_k = mu_{i+j+k}
    const Matrix dh = hankel_matrix(m, n, k);
    const Matrix inv = inverse(h);
    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += inv(i, j) * dh(j, i);
    return tr;
}

namespace {

// central stencils of order 2 for derivatives 0..4: offsets in units of h
struct Stencil {
    std::vector<int> off;
    std::vector<double> w;
};

Stencil central(int order) {
    switch (order) {
    case 0: return {{0}, {1.0}};
    case 1: return {{-1, 1}, {-0.5, 0.5}};
    case 2: return {{-1, 0, 1}, {1.0, -2.0, 1.0}};
    case 3: return {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
    case 4: return {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}};
    }
    throw Error(ErrorKind::unsupported, "stencil order above 4");
}

double fd_once(const HankelMoments& m, int n, const std::vector<int>& alpha, double h) {
    const int K = static_cast<int>(alpha.size());
    std::vector<Stencil> st;
    int total = 0;
    for (int k = 0; k < K; ++k) {
        st.push_back(central(alpha[k]));
        total += alpha[k];
    }
    const int need = 2 * n - 2;
    double sum = 0.0;
    std::vector<std::size_t> idx(K, 0);
    while (true) {
        std::vector<double> t(K, 0.0);
        double w = 1.0;
        for (int k = 0; k < K; ++k) {
            t[k] = st[k].off[idx[k]] * h;
            w *= st[k].w[idx[k]];
        }
        const HankelMoments mt = evolve_hankel(m, t, need);
        const double tau = lu_determinant(hankel_matrix(mt, n));
        require_regular_tau(mt, n, tau);
        sum += w * std::log(std::abs(tau));
        int k = 0;
        while (k < K && ++idx[k] == st[k].off.size()) idx[k++] = 0;
        if (k == K) break;
    }
    return sum / std::pow(h, total);
}

} // namespace

double dlog_tau_fd(const HankelMoments& m, int n, const std::vector<int>& alpha, double h) {
    const double d1 = fd_once(m, n, alpha, h);
    const double d2 = fd_once(m, n, alpha, h / 2);
    return (4.0 * d2 - d1) / 3.0;
}

KpResult kp_residual(const HankelMoments& m, int n) {
    if (n < 1) throw Error(ErrorKind::dimension, "KP residual needs n >= 1");
    const Jet tau = tau_jet(m, n, {1, 2, 3}, 4);
    require_regular_tau(m, n, tau.value());
    const Jet f = tau.value() > 0 ? log(tau) : log(-tau);
    KpResult r{};
    const double f11 = f.derivative({2, 0, 0});
    r.terms = {f.derivative({4, 0, 0}), 3.0 * f.derivative({0, 2, 0}), -4.0 * f.derivative({1, 0, 1}),
               6.0 * f11 * f11};
    double big = 0.0, s = 0.0;
    for (double v : r.terms) {
        big = std::max(big, std::abs(v));
        s += v;
    }
    r.residual = big > 0 ? s / big : 0.0;
    return r;
}

} // namespace laxlab
