#include "laxlab/aci.hpp"

#include "laxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace laxlab {

namespace {

using cplx = std::complex<double>;

cplx complex_det(std::vector<cplx> a, int n) {
    cplx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
        if (a[p * n + k] == 0.0) return 0.0;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[k * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a[i * n + k] / a[k * n + k];
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    return det;
}

Matrix outer(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = x[i] * y[j];
    return m;
}

std::vector<double> f_second(FKind f, const std::vector<double>& alpha) {
    std::vector<double> out;
    for (double a : alpha) {
        switch (f) {
        case FKind::three_halves:
            if (!(a > 0)) throw Error(ErrorKind::domain, "x^{3/2} needs positive alpha");
            out.push_back(0.5 / std::sqrt(a));
            break;
        case FKind::log:
            if (!(a > 0)) throw Error(ErrorKind::domain, "ln x needs positive alpha");
            out.push_back(-1.0 / (a * a));
            break;
        case FKind::quadratic:
            out.push_back(1.0);
            break;
        }
    }
    return out;
}

void check_distinct(const std::vector<double>& alpha) {
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = i + 1; j < alpha.size(); ++j)
            if (alpha[i] == alpha[j]) throw Error(ErrorKind::degeneracy, "alpha entries must be distinct");
}

LaxPolynomial axpy(const LaxPolynomial& a, double s, const std::vector<Matrix>& d) {
    LaxPolynomial out = a;
    for (std::size_t j = 0; j < d.size(); ++j) out.a[j] += s * d[j];
    return out;
}

} // namespace

Matrix LaxPolynomial::at(double h) const {
    Matrix m = a.back();
    for (int j = degree() - 1; j >= 0; --j) m = h * m + a[j];
    return m;
}

double LaxPolynomial::manifold_defect() const {
    double d = 0;
    const int m = degree();
    for (int i = 0; i < size(); ++i) {
        d = std::max(d, std::abs(a[m - 1](i, i) - gamma[i]));
        for (int j = 0; j < size(); ++j) d = std::max(d, std::abs(a[m](i, j) - (i == j ? alpha[i] : 0.0)));
    }
    return d;
}

FKind hamiltonian_kind(SystemKind k) {
    switch (k) {
    case SystemKind::euler: return FKind::three_halves;
    case SystemKind::neumann: return FKind::quadratic;
    default: return FKind::log;
    }
}

LaxPolynomial build_system(SystemKind kind, const std::vector<double>& alpha, const std::vector<double>& gamma,
                           const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(alpha.size());
    if (n < 1) throw Error(ErrorKind::dimension, "empty system");
    const std::vector<double> g = gamma.empty() ? std::vector<double>(n, 0.0) : gamma;
    if (static_cast<int>(g.size()) != n || static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw Error(ErrorKind::dimension, "alpha, gamma, x, y must have equal length");
    check_distinct(alpha);
    const Matrix gxy = outer(x, y) - outer(y, x);
    const Matrix al = Matrix::diag(alpha);
    LaxPolynomial lp;
    lp.alpha = alpha;
    lp.gamma = g;
    switch (kind) {
    case SystemKind::euler:
        lp.a = {gxy, al};
        break;
    case SystemKind::geodesic:
    case SystemKind::neumann:
        lp.a = {-1.0 * outer(x, x), gxy, al};
        break;
    case SystemKind::central_force:
        lp.a = {outer(x, y) + outer(y, x) - al, gxy, al};
        break;
    }
    lp.a[lp.degree() - 1] += Matrix::diag(g);
    return lp;
}

std::vector<double> f_prime(FKind f, const std::vector<double>& alpha) {
    std::vector<double> out;
    for (double a : alpha) {
        switch (f) {
        case FKind::three_halves:
            if (!(a > 0)) throw Error(ErrorKind::domain, "x^{3/2} needs positive alpha");
            out.push_back(std::sqrt(a));
            break;
        case FKind::log:
            if (!(a > 0)) throw Error(ErrorKind::domain, "ln x needs positive alpha");
            out.push_back(1.0 / a);
            break;
        case FKind::quadratic:
            out.push_back(a);
            break;
        }
    }
    return out;
}

Matrix b_from_a(const LaxPolynomial& a, FKind f) {
    check_distinct(a.alpha);
    const int n = a.size();
    const auto beta = f_prime(f, a.alpha), f2 = f_second(f, a.alpha);
    const Matrix& am1 = a.a[a.degree() - 1];
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b(i, j) = i == j ? a.gamma[i] * f2[i]
                             : (beta[i] - beta[j]) / (a.alpha[i] - a.alpha[j]) * am1(i, j);
    return b;
}

std::vector<Matrix> aci_vector_field(const LaxPolynomial& a, FKind f) {
    const Matrix b = b_from_a(a, f);
    const Matrix beta = Matrix::diag(f_prime(f, a.alpha));
    std::vector<Matrix> d;
    for (int j = 0; j <= a.degree(); ++j) {
        Matrix dj = commutator(a.a[j], b);
        if (j > 0) dj += commutator(a.a[j - 1], beta);
        d.push_back(dj);
    }
    return d;
}

LaxPolynomial aci_flow(const LaxPolynomial& a0, FKind f, double t_end, double step) {
    if (!(step > 0)) throw Error(ErrorKind::domain, "step must be positive");
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t_end) / step - 1e-9)));
    const double h = t_end / steps;
    const SpectralCurve q0 = spectral_curve_coeffs(a0);
    LaxPolynomial a = a0;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = aci_vector_field(a, f);
        const auto k2 = aci_vector_field(axpy(a, 0.5 * h, k1), f);
        const auto k3 = aci_vector_field(axpy(a, 0.5 * h, k2), f);
        const auto k4 = aci_vector_field(axpy(a, h, k3), f);
        for (int j = 0; j <= a.degree(); ++j)
            a.a[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if ((s + 1) % 128 == 0 || s + 1 == steps) {
            if (spectral_curve_drift(q0, spectral_curve_coeffs(a)) > 1e-6 || a.manifold_defect() > 1e-6)
                throw Error(ErrorKind::stability, "invariant drift above 1e-6");
        }
    }
    return a;
}

double SpectralCurve::coeff(int k, int l) const {
    const auto it = q.find({k, l});
    return it == q.end() ? 0.0 : it->second;
}

SpectralCurve spectral_curve_coeffs(const LaxPolynomial& a) {
    // samples on the unit circles in h and z; the Vandermonde solve is then a discrete Fourier transform
    const int n = a.size(), m = a.degree();
    const int H = m * n + 1, Z = n + 1;
    std::vector<cplx> vals(static_cast<std::size_t>(H) * Z);
    std::vector<cplx> mat(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < H; ++p) {
        const cplx h = std::polar(1.0, 2 * M_PI * p / H);
        for (int r = 0; r < Z; ++r) {
            const cplx z = std::polar(1.0, 2 * M_PI * r / Z);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    cplx s = a.a[m](i, j);
                    for (int k = m - 1; k >= 0; --k) s = h * s + a.a[k](i, j);
                    mat[i * n + j] = (i == j ? z : 0.0) - s;
                }
            vals[p * Z + r] = complex_det(mat, n);
        }
    }
    SpectralCurve c;
    c.conditioning_warning = n > 6;
    for (int k = 0; k < H; ++k)
        for (int l = 0; l < Z; ++l) {
            cplx s = 0;
            for (int p = 0; p < H; ++p)
                for (int r = 0; r < Z; ++r)
                    s += vals[p * Z + r] * std::polar(1.0, -2 * M_PI * (static_cast<double>(p) * k / H +
                                                                        static_cast<double>(r) * l / Z));
            c.q[{k, l}] = s.real() / (H * Z);
        }
    return c;
}

double spectral_curve_drift(const SpectralCurve& a, const SpectralCurve& b) {
    double d = 0, scale = 0;
    for (const auto& [key, v] : a.q) {
        d = std::max(d, std::abs(v - b.coeff(key.first, key.second)));
        scale = std::max(scale, std::abs(v));
    }
    for (const auto& [key, v] : b.q) scale = std::max(scale, std::abs(v));
    return d / std::max(scale, 1e-300);
}

double commutativity_report(const LaxPolynomial& a0, FKind f1, FKind f2, double t_small, double step) {
    const auto x = aci_flow(aci_flow(a0, f1, t_small, step), f2, t_small, step);
    const auto y = aci_flow(aci_flow(a0, f2, t_small, step), f1, t_small, step);
    double d = 0;
    for (int j = 0; j <= a0.degree(); ++j) d = std::max(d, max_abs_diff(x.a[j], y.a[j]));
    return d;
}

double rank_one_defect(const Matrix& m) {
    double d = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int k = i + 1; k < m.rows(); ++k)
            for (int j = 0; j < m.cols(); ++j)
                for (int l = j + 1; l < m.cols(); ++l) d = std::max(d, std::abs(m(i, j) * m(k, l) - m(i, l) * m(k, j)));
    const double s = m.max_abs();
    return s > 0 ? d / (s * s) : 0.0;
}

} // namespace laxlab
