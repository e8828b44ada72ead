#include "laxlab/fredholm.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/special.hpp"
#include "text.hpp"

#include <cmath>
#include <limits>

namespace laxlab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Ai^{(k)}(x), k = 0..kmax, from Ai'' = x Ai
std::vector<double> airy_derivatives(double x, int kmax) {
    std::vector<double> d(std::max(kmax, 1) + 1);
    d[0] = airy_ai(x);
    d[1] = airy_ai_prime(x);
    for (int k = 0; k + 2 <= kmax; ++k) d[k + 2] = x * d[k] + (k ? k * d[k - 1] : 0.0);
    return d;
}

// J_nu(sqrt x) / x^{nu/2}, entire in x
double bessel_reduced(double nu, double x) {
    if (x > 60.0) return bessel_j(nu, std::sqrt(x)) / std::pow(x, nu / 2);
    long double term = 1.0L / (std::tgamma(static_cast<long double>(nu) + 1) * std::pow(2.0L, nu));
    long double sum = term;
    for (int m = 1; m < 300; ++m) {
        term *= -static_cast<long double>(x) / (4.0L * m * (m + nu));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

// derivatives of bessel_reduced: d^k = (-1/2)^k j_{nu+k}
std::vector<double> bessel_reduced_derivatives(double nu, double x, int kmax) {
    std::vector<double> d(kmax + 1);
    double f = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        d[k] = f * bessel_reduced(nu + k, x);
        f *= -0.5;
    }
    return d;
}

// bessel kernel divided by (yz)^{nu/2}
double bessel_kernel_reduced(double nu, double y, double z) {
    const auto a = bessel_reduced_derivatives(nu, y, 2);
    if (y == z) return y * a[1] * a[1] - a[0] * a[1] - y * a[0] * a[2];
    const auto b = bessel_reduced_derivatives(nu, z, 1);
    return (z * a[0] * b[1] - y * a[1] * b[0]) / (y - z);
}

double kernel_reduced(const KernelSpec& k, double y, double z) {
    if (k.kind == KernelKind::bessel) return bessel_kernel_reduced(k.nu, y, z);
    return kernel_eval(k, y, z);
}

Jet taylor(const std::vector<double>& d, int from, const Jet& x) {
    const int deg = x.space()->degree();
    std::vector<double> a(deg + 1, 0.0);
    double f = 1.0;
    for (int k = 0; k <= deg && from + k < static_cast<int>(d.size()); ++k) {
        if (k) f *= k;
        a[k] = d[from + k] / f;
    }
    return compose(a, x);
}

struct Piece {
    double lo, hi;
    bool hard_edge;  // bessel piece starting at 0
};

std::vector<Piece> pieces_for(const KernelSpec& k, const IntervalUnion& e) {
    std::vector<Piece> out;
    for (const auto& p : e.pieces()) {
        double lo = p.lo, hi = p.hi;
        switch (k.kind) {
        case KernelKind::airy:
            if (std::isinf(lo)) throw Error(ErrorKind::domain, "airy determinant needs E bounded below");
            if (std::isinf(hi)) hi = inf;
            break;
        case KernelKind::bessel:
            if (lo < 0.0) throw Error(ErrorKind::domain, "bessel kernel lives on (0, inf)");
            if (std::isinf(hi)) throw Error(ErrorKind::domain, "bessel determinant needs bounded E");
            break;
        case KernelKind::sine:
            if (std::isinf(lo) || std::isinf(hi)) throw Error(ErrorKind::domain, "sine determinant needs bounded E");
            break;
        case KernelKind::hermite: {
            const double cut = (std::sqrt(2.0 * k.N) + 8.0) / std::sqrt(k.b);
            lo = std::max(lo, -cut);
            hi = std::min(hi, cut);
            break;
        }
        }
        if (!(hi > lo)) continue;
        out.push_back({lo, hi, k.kind == KernelKind::bessel && lo == 0.0});
    }
    return out;
}

// length of the cut-off airy piece starting at a
double airy_tail_length(double a) { return std::max(6.0, 10.0 - a); }

} // namespace

KernelSpec KernelSpec::airy(double lambda) {
    KernelSpec k;
    k.kind = KernelKind::airy;
    k.lambda = lambda;
    return k;
}

KernelSpec KernelSpec::bessel(double nu, double lambda) {
    KernelSpec k;
    k.kind = KernelKind::bessel;
    k.nu = nu;
    k.lambda = lambda;
    k.validate();
    return k;
}

KernelSpec KernelSpec::sine(double lambda) {
    KernelSpec k;
    k.kind = KernelKind::sine;
    k.lambda = lambda;
    return k;
}

KernelSpec KernelSpec::hermite(int N, double b, double lambda) {
    KernelSpec k;
    k.kind = KernelKind::hermite;
    k.N = N;
    k.b = b;
    k.lambda = lambda;
    k.validate();
    return k;
}

KernelSpec KernelSpec::parse(const std::string& s) {
    const auto p = text::split(s, ':');
    if (p.empty()) throw Error(ErrorKind::usage, "empty kernel");
    if (p[0] == "airy" && p.size() == 1) return airy();
    if (p[0] == "sine" && p.size() == 1) return sine();
    if (p[0] == "bessel" && p.size() == 2) return bessel(text::number(p[1]));
    if (p[0] == "hermite" && (p.size() == 2 || p.size() == 3)) {
        const double n = text::number(p[1]);
        if (n != std::floor(n)) throw Error(ErrorKind::usage, "hermite N must be an integer");
        return hermite(static_cast<int>(n), p.size() == 3 ? text::number(p[2]) : 1.0);
    }
    throw Error(ErrorKind::usage, "unknown kernel '" + s + "' (airy, bessel:nu, sine, hermite:N[:b])");
}

void KernelSpec::validate() const {
    if (kind == KernelKind::bessel && !(nu > -1.0)) throw Error(ErrorKind::domain, "bessel kernel needs nu > -1");
    if (kind == KernelKind::hermite && (N < 1 || !(b > 0))) throw Error(ErrorKind::domain, "hermite kernel needs N >= 1, b > 0");
}

std::string KernelSpec::str() const {
    char buf[64];
    switch (kind) {
    case KernelKind::airy: return "airy";
    case KernelKind::sine: return "sine";
    case KernelKind::bessel: std::snprintf(buf, sizeof buf, "bessel:%.17g", nu); return buf;
    case KernelKind::hermite: std::snprintf(buf, sizeof buf, "hermite:%d:%.17g", N, b); return buf;
    }
    return "";
}

std::vector<double> hermite_functions(int N, double b, double z) {
    std::vector<double> phi(N);
    const double x = std::sqrt(b) * z, c = std::pow(b, 0.25);
    phi[0] = c * std::pow(M_PI, -0.25) * std::exp(-x * x / 2);
    if (N > 1) phi[1] = std::sqrt(2.0) * x * phi[0];
    for (int k = 1; k + 1 < N; ++k)
        phi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * phi[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * phi[k - 1];
    return phi;
}

double kernel_eval(const KernelSpec& k, double y, double z) {
    switch (k.kind) {
    case KernelKind::airy: {
        const double ay = airy_ai(y), apy = airy_ai_prime(y);
        if (y == z) return apy * apy - y * ay * ay;
        return (ay * airy_ai_prime(z) - apy * airy_ai(z)) / (y - z);
    }
    case KernelKind::bessel:
        if (!(y > 0) || !(z > 0)) throw Error(ErrorKind::domain, "bessel kernel needs y, z > 0");
        return std::pow(y * z, k.nu / 2) * bessel_kernel_reduced(k.nu, y, z);
    case KernelKind::sine: {
        const double d = M_PI * (y - z);
        return d == 0.0 ? 1.0 : std::sin(d) / d;
    }
    case KernelKind::hermite: {
        const auto a = hermite_functions(k.N, k.b, y), c = hermite_functions(k.N, k.b, z);
        double s = 0;
        for (int i = 0; i < k.N; ++i) s += a[i] * c[i];
        return s;
    }
    }
    return 0.0;
}

NystromGrid nystrom_grid(const KernelSpec& k, const IntervalUnion& e, int order) {
    k.validate();
    NystromGrid g;
    for (const auto& p : pieces_for(k, e)) {
        const double hi = std::isinf(p.hi) ? p.lo + airy_tail_length(p.lo) : p.hi;
        const auto r = p.hard_edge ? gauss_jacobi_rule(order, 0.0, hi, k.nu) : gauss_legendre_rule(order, p.lo, hi);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            g.nodes.push_back(r.nodes[i]);
            g.weights.push_back(r.weights[i]);
            double s = std::sqrt(r.weights[i]);
            if (k.kind == KernelKind::bessel && !p.hard_edge) s *= std::pow(r.nodes[i], k.nu / 2);
            g.scale.push_back(s);
        }
    }
    return g;
}

Matrix nystrom_matrix(const KernelSpec& k, const IntervalUnion& e, int order) {
    const auto g = nystrom_grid(k, e, order);
    const int n = static_cast<int>(g.nodes.size());
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = g.scale[i] * kernel_reduced(k, g.nodes[i], g.nodes[j]) * g.scale[j];
    return a;
}

double nystrom_det(const KernelSpec& k, const IntervalUnion& e, int order) {
    if (k.lambda == 0.0) return 1.0;
    Matrix a = nystrom_matrix(k, e, order);
    if (a.rows() == 0) return 1.0;
    a *= -k.lambda;
    for (int i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
    return lu_determinant(a);
}

FredholmValue nystrom_det_checked(const KernelSpec& k, const IntervalUnion& e, int order) {
    const double a = nystrom_det(k, e, order), b = nystrom_det(k, e, 2 * order);
    return {b, std::abs(a - b)};
}

Jet fredholm_log_det_jet(const KernelSpec& k, const IntervalUnion& e, const std::function<Jet(double)>& move,
                         int order) {
    k.validate();
    if (k.kind != KernelKind::airy && k.kind != KernelKind::bessel)
        throw Error(ErrorKind::unsupported, "endpoint jets only for airy and bessel kernels");
    const Jet probe = move(0.0);
    const auto sp = probe.space();
    const int deg = sp->degree();
    std::vector<Jet> x, s, f0, f1, f2;
    for (const auto& p : pieces_for(k, e)) {
        const Jet a = p.hard_edge ? Jet(sp, 0.0) : move(p.lo);
        const Jet b = std::isinf(p.hi) ? a + airy_tail_length(p.lo) : move(p.hi);
        const Jet len = b - a;
        const auto r = p.hard_edge ? gauss_jacobi_rule(order, 0.0, 1.0, k.nu) : gauss_legendre_rule(order, 0.0, 1.0);
        const Jet wscale = p.hard_edge ? pow(len, 1.0 + k.nu) : len;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            const Jet xi = a + len * r.nodes[i];
            Jet si = sqrt(wscale * r.weights[i]);
            if (k.kind == KernelKind::bessel && !p.hard_edge) si *= pow(xi, k.nu / 2);
            std::vector<double> d = k.kind == KernelKind::airy ? airy_derivatives(xi.value(), deg + 2)
                                                                : bessel_reduced_derivatives(k.nu, xi.value(), deg + 2);
            x.push_back(xi);
            s.push_back(si);
            f0.push_back(taylor(d, 0, xi));
            f1.push_back(taylor(d, 1, xi));
            f2.push_back(taylor(d, 2, xi));
        }
    }
    const int n = static_cast<int>(x.size());
    if (n == 0 || k.lambda == 0.0) return Jet(sp, 0.0);
    std::vector<Jet> m(static_cast<std::size_t>(n) * n, Jet(sp, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet kij(sp, 0.0);
            if (k.kind == KernelKind::airy) {
                if (i == j)
                    kij = f1[i] * f1[i] - x[i] * f0[i] * f0[i];
                else
                    kij = (f0[i] * f1[j] - f1[i] * f0[j]) / (x[i] - x[j]);
            } else {
                if (i == j)
                    kij = x[i] * f1[i] * f1[i] - f0[i] * f1[i] - x[i] * f0[i] * f2[i];
                else
                    kij = (x[j] * f0[i] * f1[j] - x[i] * f1[i] * f0[j]) / (x[i] - x[j]);
            }
            Jet v = s[i] * kij * s[j] * (-k.lambda);
            m[static_cast<std::size_t>(j) * n + i] = v;
            if (i == j) v += 1.0;
            m[static_cast<std::size_t>(i) * n + j] = v;
        }
    const Jet det = determinant_of(std::move(m), n);
    if (!(det.value() > 0)) throw Error(ErrorKind::domain, "Fredholm determinant not positive");
    return log(det);
}

double rescaled_hermite_kernel(int N, ScalingRegime regime, double y, double z) {
    const KernelSpec k = KernelSpec::hermite(N);
    if (regime == ScalingRegime::bulk) {
        const double k00 = kernel_eval(k, 0.0, 0.0);
        return kernel_eval(k, y / k00, z / k00) / k00;
    }
    const double c = std::sqrt(2.0 * N), sc = 1.0 / (std::sqrt(2.0) * std::pow(N, 1.0 / 6.0));
    return sc * kernel_eval(k, c + y * sc, c + z * sc);
}

double scaling_limit_error(int N, ScalingRegime regime, const std::vector<double>& grid) {
    const KernelSpec lim = regime == ScalingRegime::bulk ? KernelSpec::sine() : KernelSpec::airy();
    double worst = 0;
    for (double y : grid)
        for (double z : grid)
            worst = std::max(worst, std::abs(rescaled_hermite_kernel(N, regime, y, z) - kernel_eval(lim, y, z)));
    return worst;
}

} // namespace laxlab
