#include "laxlab/ensembles.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/pfaff.hpp"
#include "laxlab/tau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace laxlab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// rho(Z) on a jet argument
Jet density_jet(const WeightSpec& w, const Jet& z) {
    switch (w.family) {
    case WeightFamily::gaussian: return exp(-w.b * z * z);
    case WeightFamily::laguerre: return pow(z, w.a) * exp(-w.b * z);
    case WeightFamily::uniform: return Jet(z.space(), 1.0);
    case WeightFamily::custom: break;
    }
    throw Error(ErrorKind::unsupported, "custom weights have no density");
}

// int_c^{B} z^k rho for a jet B with B(0) = c
Jet partial_moment(const WeightSpec& w, int k, double c, const Jet& B) {
    const int d = B.space()->degree();
    const auto sp1 = make_jet_space(1, d);
    const Jet z = Jet::variable(sp1, 0, c);
    const Jet f = pow(z, k) * density_jet(w, z);
    std::vector<double> a(d + 1, 0.0);
    for (int m = 0; m + 1 <= d; ++m) a[m + 1] = f.coeff(m) / (m + 1);
    return compose(a, B);
}

IntervalUnion cut_at(const WeightSpec& w, double x) {
    const Interval s = w.support();
    if (!(x > s.lo)) throw Error(ErrorKind::empty_domain, "cut point below the support");
    return IntervalUnion({{s.lo, std::min(x, s.hi)}});
}

IntervalUnion full_range(const WeightSpec& w) { return IntervalUnion({w.support()}); }

double ratio_or_throw(double num, double den) {
    if (!(den > 0)) throw Error(ErrorKind::singular_tau, "full-range normalization vanishes");
    return num / den;
}

// skew moments (j - i) M_{i+j-1} from moments, beta = 4
template <class T>
std::vector<T> beta4_entries(const std::vector<T>& M, int size, const T& zero) {
    std::vector<T> a(static_cast<std::size_t>(size) * size, zero);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (i != j) a[static_cast<std::size_t>(i) * size + j] = M[i + j - 1] * static_cast<double>(j - i);
    return a;
}

template <class T>
std::vector<T> hankel_entries(const std::vector<T>& M, int n) {
    std::vector<T> a;
    a.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.push_back(M[i + j]);
    return a;
}

// unnormalized tau on the full range
double full_tau(const EnsembleSpec& e, int order) {
    const IntervalUnion F = full_range(e.w);
    if (e.beta == 2) return tau_table(hankel_moments(e.w, F, 2 * e.n, order), e.n)[e.n];
    if (e.beta == 4) {
        const auto mu = hankel_moments(e.w, F, 4 * e.n, order).mu;
        return pfaffian_of(beta4_entries(mu, 2 * e.n, 0.0), 2 * e.n);
    }
    return pfaff_tau_table(skew_inner_products(e.w, F, -1, e.n, order), e.n / 2)[e.n / 2];
}

} // namespace

void EnsembleSpec::validate_matrix() const {
    if (beta != 1 && beta != 2 && beta != 4) throw Error(ErrorKind::unsupported, "beta must be 1, 2 or 4");
    if (n < 1) throw Error(ErrorKind::dimension, "ensemble size must be positive");
    w.validate();
    if (w.family != WeightFamily::gaussian && w.family != WeightFamily::laguerre)
        throw Error(ErrorKind::unsupported, "ensembles use gaussian or laguerre weights");
}

void EnsembleSpec::validate() const {
    validate_matrix();
    if (beta == 1 && n % 2) throw Error(ErrorKind::unsupported, "beta = 1 Pfaffian form needs even n");
}

double gap_probability(const EnsembleSpec& e, const IntervalUnion& E, int order) {
    e.validate();
    if (E.empty()) return 0.0;
    IntervalUnion c;
    try {
        c = clip_to_support(e.w, E);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::empty_domain) return 0.0;
        throw;
    }
    double num = 0;
    if (e.beta == 2) {
        num = tau_table(hankel_moments(e.w, c, 2 * e.n, order), e.n)[e.n];
    } else if (e.beta == 4) {
        const auto mu = hankel_moments(e.w, c, 4 * e.n, order).mu;
        num = pfaffian_of(beta4_entries(mu, 2 * e.n, 0.0), 2 * e.n);
    } else {
        num = pfaff_tau_table(skew_inner_products(e.w, c, -1, e.n, order), e.n / 2)[e.n / 2];
    }
    return ratio_or_throw(num, full_tau(e, order));
}

double gap_probability_gram(const EnsembleSpec& e, const IntervalUnion& E, int order) {
    e.validate();
    if (e.beta != 2) throw Error(ErrorKind::unsupported, "the Gram route is for beta = 2");
    if (E.empty()) return 0.0;
    IntervalUnion c;
    try {
        c = clip_to_support(e.w, E);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::empty_domain) return 0.0;
        throw;
    }
    const int n = e.n;
    const double a = e.w.a, b = e.w.b;
    const bool gauss = e.w.family == WeightFamily::gaussian;
    // orthonormal polynomials at z
    auto polys = [&](double z) {
        std::vector<double> p(n);
        if (gauss) {
            const double x = std::sqrt(b) * z;
            p[0] = std::pow(b, 0.25) / std::pow(M_PI, 0.25);
            if (n > 1) p[1] = std::sqrt(2.0) * x * p[0];
            for (int k = 1; k + 1 < n; ++k)
                p[k + 1] = std::sqrt(2.0 / (k + 1)) * x * p[k] - std::sqrt(double(k) / (k + 1)) * p[k - 1];
        } else {
            const double x = b * z;
            p[0] = std::exp(0.5 * ((a + 1) * std::log(b) - std::lgamma(a + 1)));
            for (int k = 0; k + 1 < n; ++k) {
                const double prev = k == 0 ? 0.0 : std::sqrt(k * (k + a)) * p[k - 1];
                p[k + 1] = ((2 * k + a + 1 - x) * p[k] - prev) / std::sqrt((k + 1) * (k + a + 1));
            }
        }
        return p;
    };
    if (!gauss && e.w.family != WeightFamily::laguerre)
        throw Error(ErrorKind::unsupported, "the Gram route needs a gaussian or laguerre weight");
    const auto rule = weighted_rule(e.w, c, order);
    Matrix g(n, n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto p = polys(rule.nodes[q]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) += rule.weights[q] * p[i] * p[j];
    }
    return lu_determinant(g);
}

std::vector<Jet> moment_jets(const WeightSpec& w, const IntervalUnion& E, const std::function<Jet(double)>& move,
                             int kmax) {
    const IntervalUnion c = clip_to_support(w, E);
    const Interval s = w.support();
    const auto base = hankel_moments(w, c, kmax).mu;
    const auto sp = move(c.pieces()[0].lo == s.lo ? c.pieces()[0].hi : c.pieces()[0].lo).space();
    std::vector<Jet> M;
    for (int k = 0; k <= kmax; ++k) M.emplace_back(sp, base[k]);
    for (const auto& p : c.pieces()) {
        if (std::isfinite(p.hi) && p.hi != s.hi) {
            const Jet B = move(p.hi);
            for (int k = 0; k <= kmax; ++k) M[k] += partial_moment(w, k, p.hi, B);
        }
        if (std::isfinite(p.lo) && p.lo != s.lo) {
            const Jet A = move(p.lo);
            for (int k = 0; k <= kmax; ++k) M[k] -= partial_moment(w, k, p.lo, A);
        }
    }
    return M;
}

Jet gap_probability_jet(const EnsembleSpec& e, const IntervalUnion& E, const std::function<Jet(double)>& move) {
    e.validate();
    if (e.beta == 1) throw Error(ErrorKind::unsupported, "moving multi-endpoint sets need beta = 2 or 4");
    const double den = full_tau(e, 0);
    if (e.beta == 2) {
        const auto M = moment_jets(e.w, E, move, 2 * e.n - 2);
        return determinant_of(hankel_entries(M, e.n), e.n) / den;
    }
    const auto M = moment_jets(e.w, E, move, 4 * e.n - 3);
    return pfaffian_of(beta4_entries(M, 2 * e.n, Jet(M[0].space(), 0.0)), 2 * e.n) / den;
}

Jet gap_probability_jet(const EnsembleSpec& e, double x, int degree) {
    e.validate();
    const auto sp = make_jet_space(1, degree);
    const IntervalUnion E = cut_at(e.w, x);
    auto move = [&](double c) { return Jet::variable(sp, 0, c); };
    if (e.beta != 1) return gap_probability_jet(e, E, move);
    // beta = 1: d mu_ij / dx = rho(x) (x^j M_i(x) - x^i M_j(x))
    const int n = e.n;
    const auto base = skew_inner_products(e.w, E, -1, n);
    const auto M = moment_jets(e.w, E, move, n - 1);
    const Jet X = Jet::variable(sp, 0, x);
    const Jet rho = density_jet(e.w, X);
    std::vector<Jet> xp{Jet(sp, 1.0)};
    for (int k = 1; k < n; ++k) xp.push_back(xp.back() * X);
    std::vector<Jet> a(static_cast<std::size_t>(n) * n, Jet(sp, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Jet v = (rho * (xp[j] * M[i] - xp[i] * M[j])).integrate(0);
            v += base.m(i, j);
            a[static_cast<std::size_t>(j) * n + i] = -v;
            a[static_cast<std::size_t>(i) * n + j] = v;
        }
    return pfaffian_of(std::move(a), n) / full_tau(e, 0);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) : state_(splitmix64(seed ^ splitmix64(index))) {}
    double uniform() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return static_cast<double>(splitmix64(state_ - 0x9e3779b97f4a7c15ULL) >> 11) * 0x1.0p-53;
    }
    double normal() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u = 0;
        while (u == 0.0) u = uniform();
        const double v = uniform(), r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2 * M_PI * v);
        have_ = true;
        return r * std::cos(2 * M_PI * v);
    }

private:
    std::uint64_t state_;
    double spare_ = 0;
    bool have_ = false;
};

// left multiplication by the unit i, j, k on R^4
constexpr int qsign[4][4][4] = {
    {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
    {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}},
    {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}},
    {{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}},
};

// real representation of a matrix with d = 1, 2 or 4 real components per entry
Matrix embed(const std::vector<Matrix>& comp) {
    const int d = static_cast<int>(comp.size());
    const int r = comp[0].rows(), c = comp[0].cols();
    Matrix out(r * d, c * d);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            for (int u = 0; u < d; ++u)
                for (int p = 0; p < d; ++p)
                    for (int q = 0; q < d; ++q) {
                        int s = 0;
                        if (d == 1) s = 1;
                        else if (d == 2) s = (u == 0) ? (p == q) : (p == q ? 0 : (p == 1 ? 1 : -1));
                        else s = qsign[u][p][q];
                        if (s) out(i * d + p, j * d + q) += s * comp[u](i, j);
                    }
    return out;
}

int components(int beta) { return beta == 4 ? 4 : beta; }

int laguerre_rows(const EnsembleSpec& e) {
    // eigenvalue weight z^a: beta = 1: a = (m - n - 1)/2; 2: a = m - n; 4: a = 2(m - n) + 1
    const double a = e.w.a;
    double m = 0;
    if (e.beta == 1) m = e.n + 2 * a + 1;
    else if (e.beta == 2) m = e.n + a;
    else m = e.n + (a - 1) / 2;
    if (m != std::floor(m) || m < e.n) throw Error(ErrorKind::unsupported, "laguerre exponent not realizable by A^*A");
    return static_cast<int>(m);
}

} // namespace

std::vector<double> sample_eigenvalues(const EnsembleSpec& e, std::uint64_t seed, std::uint64_t index) {
    Stream rng(seed, index);
    const int d = components(e.beta), n = e.n;
    Matrix big;
    if (e.w.family == WeightFamily::gaussian) {
        std::vector<Matrix> comp(d, Matrix(n, n));
        const double sd_diag = std::sqrt(1.0 / (2 * e.w.b)), sd_off = std::sqrt(1.0 / (4 * e.w.b));
        for (int i = 0; i < n; ++i) {
            comp[0](i, i) = sd_diag * rng.normal();
            for (int j = i + 1; j < n; ++j)
                for (int u = 0; u < d; ++u) {
                    const double v = sd_off * rng.normal();
                    comp[u](i, j) = v;
                    comp[u](j, i) = u == 0 ? v : -v;
                }
        }
        big = embed(comp);
    } else {
        const int m = laguerre_rows(e);
        std::vector<Matrix> comp(d, Matrix(m, n));
        const double sd = std::sqrt(1.0 / (2 * e.w.b));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                for (int u = 0; u < d; ++u) comp[u](i, j) = sd * rng.normal();
        const Matrix a = embed(comp);
        big = a.transpose() * a;
    }
    const auto ev = symmetric_eigen(big);
    std::vector<double> out(n);
    const double tol = 1e-8 * (1.0 + std::abs(ev.front()) + std::abs(ev.back()));
    for (int k = 0; k < n; ++k) {
        out[k] = ev[static_cast<std::size_t>(k) * d];
        if (ev[static_cast<std::size_t>(k) * d + d - 1] - out[k] > tol)
            throw Error(ErrorKind::degeneracy, "Kramers pairs failed to collapse");
    }
    return out;
}

int default_thread_count() {
    if (const char* s = std::getenv("LAXLAB_THREADS")) {
        const int t = std::atoi(s);
        if (t > 0) return t;
    }
    return 1;
}

SampleBatch sample_ensemble(const EnsembleSpec& e, int count, std::uint64_t seed, int threads) {
    e.validate_matrix();
    if (count < 1) throw Error(ErrorKind::dimension, "need at least one sample");
    if (e.w.family == WeightFamily::laguerre) laguerre_rows(e);
    if (threads <= 0) threads = default_thread_count();
    threads = std::max(1, std::min(threads, count));
    SampleBatch batch;
    batch.seed = seed;
    batch.count = count;
    batch.n = e.n;
    batch.eigenvalues.assign(static_cast<std::size_t>(count) * e.n, 0.0);
    auto work = [&](int from, int to) {
        for (int i = from; i < to; ++i) {
            const auto ev = sample_eigenvalues(e, seed, static_cast<std::uint64_t>(i));
            std::copy(ev.begin(), ev.end(), batch.eigenvalues.begin() + static_cast<std::ptrdiff_t>(i) * e.n);
        }
    };
    if (threads == 1) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(work, static_cast<int>(static_cast<long long>(count) * t / threads),
                              static_cast<int>(static_cast<long long>(count) * (t + 1) / threads));
        for (auto& th : pool) th.join();
    }
    return batch;
}

std::pair<double, double> empirical_gap(const SampleBatch& batch, const IntervalUnion& E) {
    if (batch.count < 1) throw Error(ErrorKind::dimension, "empty batch");
    if (E.empty()) return {0.0, 0.0};
    long long hits = 0;
    for (int i = 0; i < batch.count; ++i) {
        const double* s = batch.sample(i);
        bool all = true;
        for (int k = 0; k < batch.n && all; ++k) all = E.contains(s[k]);
        hits += all;
    }
    const double p = static_cast<double>(hits) / batch.count;
    return {p, std::sqrt(p * (1 - p) / batch.count)};
}

} // namespace laxlab

namespace laxlab {

namespace {

EnsembleFamily family_of(const WeightSpec& w) {
    if (w.family == WeightFamily::gaussian) return EnsembleFamily::gaussian;
    if (w.family == WeightFamily::laguerre) return EnsembleFamily::laguerre;
    throw Error(ErrorKind::unsupported, "equations exist for gaussian and laguerre weights");
}

} // namespace

GapSupplier gap_supplier(int beta, const WeightSpec& w) {
    family_of(w);
    return [beta, w](int n, double x, int degree) { return gap_probability_jet(EnsembleSpec{beta, w, n}, x, degree); };
}

SetGapSupplier set_gap_supplier(int beta, const WeightSpec& w) {
    family_of(w);
    if (beta == 1) throw Error(ErrorKind::unsupported, "moving multi-endpoint sets need beta = 2 or 4");
    return [beta, w](int n, const IntervalUnion& E, const std::function<Jet(double)>& move) {
        return gap_probability_jet(EnsembleSpec{beta, w, n}, E, move);
    };
}

std::vector<double> inductive_relation_residual(const EnsembleSpec& e, const std::vector<double>& x_grid) {
    e.validate();
    return beta_ode_residual(family_of(e.w), e.beta, e.n, e.w.a, e.w.b, x_grid, gap_supplier(e.beta, e.w));
}

double inductive_relation_residual(const EnsembleSpec& e, const IntervalUnion& E) {
    e.validate();
    return beta_pde_residual(family_of(e.w), e.beta, e.n, e.w.a, e.w.b, E, set_gap_supplier(e.beta, e.w));
}

} // namespace laxlab
