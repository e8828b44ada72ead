#include "laxlab/special.hpp"

#include "laxlab/error.hpp"

#include <cmath>

namespace laxlab {

namespace {

constexpr long double pi_l = 3.141592653589793238462643383279502884L;
// Ai(0) and -Ai'(0)
constexpr long double airy_c1 = 0.355028053887817239260063186004183176L;
constexpr long double airy_c2 = 0.258819403792806798405183560189203963L;
constexpr double airy_switch = 8.0;

void airy_maclaurin(double xd, double& ai, double& aip) {
    const long double x = xd, x3 = x * x * x;
    long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
    long double tf = 1.0L, tg = x, df = x * x / 2.0L, dg = 1.0L;
    fp = df;
    for (int k = 1; k < 200; ++k) {
        tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
        dg *= x3 / ((3.0L * k - 2) * (3.0L * k));
        f += tf;
        g += tg;
        gp += dg;
        if (k >= 2) {
            df *= x3 / ((3.0L * k - 1) * (3.0L * k - 3));
            fp += df;
        }
        const long double big = std::fabs(tf) + std::fabs(tg) + std::fabs(df) + std::fabs(dg);
        if (big < 1e-22L) break;
    }
    ai = static_cast<double>(airy_c1 * f - airy_c2 * g);
    aip = static_cast<double>(airy_c1 * fp - airy_c2 * gp);
}

// u_k, v_k of the large-argument expansions, stopping at the smallest term
struct AiryAsym {
    long double su_even = 0, su_odd = 0, sv_even = 0, sv_odd = 0;  // alternating-in-pairs sums (oscillatory)
    long double su = 0, sv = 0;                                     // fully alternating sums (decaying)
};

AiryAsym airy_asym(long double zeta) {
    AiryAsym r;
    long double u = 1.0L, zp = 1.0L, last = 1e300L;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            u *= (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / ((2.0L * k - 1) * 216.0L * k);
            zp *= zeta;
        }
        const long double v = (k == 0) ? 1.0L : -(6.0L * k + 1) / (6.0L * k - 1) * u;
        const long double tu = u / zp, tv = v / zp;
        if (std::fabs(tu) > last) break;
        last = std::fabs(tu);
        const long double alt = (k % 2) ? -1.0L : 1.0L;
        r.su += alt * tu;
        r.sv += alt * tv;
        const long double pair = ((k / 2) % 2) ? -1.0L : 1.0L;
        if (k % 2 == 0) {
            r.su_even += pair * tu;
            r.sv_even += pair * tv;
        } else {
            r.su_odd += pair * tu;
            r.sv_odd += pair * tv;
        }
        if (last < 1e-21L) break;
    }
    return r;
}

void airy_both(double x, double& ai, double& aip) {
    if (std::fabs(x) <= airy_switch) {
        airy_maclaurin(x, ai, aip);
        return;
    }
    if (x > 0) {
        const long double xl = x, zeta = 2.0L / 3.0L * xl * std::sqrt(xl);
        const auto s = airy_asym(zeta);
        const long double e = std::exp(-zeta) / (2.0L * std::sqrt(pi_l));
        const long double q = std::pow(xl, 0.25L);
        ai = static_cast<double>(e / q * s.su);
        aip = static_cast<double>(-e * q * s.sv);
        return;
    }
    const long double y = -x, zeta = 2.0L / 3.0L * y * std::sqrt(y);
    const auto s = airy_asym(zeta);
    const long double ph = zeta + pi_l / 4.0L;
    const long double q = std::pow(y, 0.25L), sp = std::sqrt(pi_l);
    ai = static_cast<double>((std::sin(ph) * s.su_even - std::cos(ph) * s.su_odd) / (q * sp));
    aip = static_cast<double>(-q / sp * (std::cos(ph) * s.sv_even + std::sin(ph) * s.sv_odd));
}

constexpr double bessel_switch = 17.0;

long double bessel_series(long double nu, long double x, bool deriv) {
    const long double h = x / 2.0L;
    long double term = std::pow(h, nu) / std::tgamma(nu + 1.0L);
    long double sum = 0.0L;
    for (int k = 0; k < 400; ++k) {
        const long double c = deriv ? (2.0L * k + nu) / x : 1.0L;
        sum += c * term;
        term *= -h * h / ((k + 1.0L) * (k + 1.0L + nu));
        if (k > h && std::fabs(term) < 1e-24L) break;
    }
    return sum;
}

long double bessel_hankel(long double nu, long double x) {
    const long double mu = 4.0L * nu * nu;
    long double p = 0.0L, q = 0.0L, t = 1.0L, last = 1e300L;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) t *= (mu - (2.0L * k - 1) * (2.0L * k - 1)) / (k * 8.0L * x);
        if (std::fabs(t) > last && k > 2) break;
        last = std::fabs(t);
        switch (k % 4) {
        case 0: p += t; break;
        case 1: q += t; break;
        case 2: p -= t; break;
        case 3: q -= t; break;
        }
        if (last < 1e-22L) break;
    }
    const long double w = x - (nu / 2.0L + 0.25L) * pi_l;
    return std::sqrt(2.0L / (pi_l * x)) * (p * std::cos(w) - q * std::sin(w));
}

} // namespace

double airy_ai(double x) {
    double a, ap;
    airy_both(x, a, ap);
    return a;
}

double airy_ai_prime(double x) {
    double a, ap;
    airy_both(x, a, ap);
    return ap;
}

double bessel_j(double nu, double x) {
    if (!(nu > -1.0)) throw Error(ErrorKind::domain, "bessel order must exceed -1");
    if (x < 0) throw Error(ErrorKind::domain, "bessel argument must be non-negative");
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return INFINITY;
    }
    if (x <= bessel_switch) return static_cast<double>(bessel_series(nu, x, false));
    return static_cast<double>(bessel_hankel(nu, x));
}

double bessel_j_prime(double nu, double x) {
    if (!(nu > -1.0)) throw Error(ErrorKind::domain, "bessel order must exceed -1");
    if (x < 0) throw Error(ErrorKind::domain, "bessel argument must be non-negative");
    if (x == 0.0) {
        if (nu == 0.0 || nu > 1.0) return 0.0;
        if (nu == 1.0) return 0.5;
        return INFINITY;
    }
    if (x <= bessel_switch) return static_cast<double>(bessel_series(nu, x, true));
    return static_cast<double>(0.5L * (bessel_hankel(nu - 1.0L, x) - bessel_hankel(nu + 1.0L, x)));
}

} // namespace laxlab
