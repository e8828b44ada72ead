#include "laxlab/toda.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace laxlab {

Matrix TridiagonalLax::matrix() const {
    const int n = size();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
    return m;
}

TridiagonalLax TridiagonalLax::from_matrix(const Matrix& m) {
    TridiagonalLax l;
    const int n = m.rows();
    for (int i = 0; i < n; ++i) l.diag.push_back(m(i, i));
    for (int i = 0; i + 1 < n; ++i) l.off.push_back(0.5 * (m(i, i + 1) + m(i + 1, i)));
    return l;
}

Matrix TridiagonalLax::band_form() const {
    const int n = size();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = off[i] * off[i];
        m(i + 1, i) = 1.0;
    }
    return m;
}

TridiagonalLax lax_from_tau(const HankelMoments& m, int n) {
    if (n < 1) throw Error(ErrorKind::dimension, "Toda matrix needs n >= 1");
    const auto tau = tau_table(m, n);
    for (int k = 1; k <= n; ++k) {
        if (!(tau[k] > 0)) throw Error(ErrorKind::singular_tau, "non-positive tau_" + std::to_string(k));
        require_regular_tau(m, k, tau[k]);
    }
    std::vector<double> d1(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) d1[k] = dlog_tau_trace(m, k, 1);
    TridiagonalLax l;
    for (int k = 0; k < n; ++k) l.diag.push_back(d1[k + 1] - d1[k]);
    for (int k = 0; k + 1 < n; ++k) l.off.push_back(std::sqrt(tau[k] * tau[k + 2]) / tau[k + 1]);
    return l;
}

TridiagonalLax lax_from_tau(const HankelMoments& m0, const std::vector<double>& t, int n) {
    return lax_from_tau(evolve_hankel(m0, t, 2 * n), n);
}

Matrix skew_part(const Matrix& x) {
    const int n = x.rows();
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            s(i, j) = x(i, j);
            s(j, i) = -x(i, j);
        }
    return s;
}

Matrix toda_vector_field(const Matrix& l, int k) {
    return commutator(0.5 * skew_part(matrix_power(l, k)), l);
}

namespace {

Matrix tridiagonal_projection(const Matrix& m) {
    return TridiagonalLax::from_matrix(m).matrix();
}

std::vector<double> spectrum(const Matrix& m) { return symmetric_eigen(m); }

double drift(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TridiagonalLax toda_ode_flow(const TridiagonalLax& l0, int k, double t_end, double step) {
    if (!(step > 0)) throw Error(ErrorKind::domain, "step must be positive");
    if (k < 1) throw Error(ErrorKind::domain, "flow index must be positive");
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t_end) / step - 1e-9)));
    const double h = t_end / steps;
    Matrix l = l0.matrix();
    const auto ev0 = spectrum(l);
    for (int s = 0; s < steps; ++s) {
        const Matrix k1 = toda_vector_field(l, k);
        const Matrix k2 = toda_vector_field(l + (0.5 * h) * k1, k);
        const Matrix k3 = toda_vector_field(l + (0.5 * h) * k2, k);
        const Matrix k4 = toda_vector_field(l + h * k3, k);
        l += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        l = tridiagonal_projection(l);
        if ((s + 1) % 64 == 0 || s + 1 == steps) {
            if (drift(spectrum(l), ev0) > 1e-6) throw Error(ErrorKind::stability, "eigenvalue drift above 1e-6");
        }
    }
    return TridiagonalLax::from_matrix(l);
}

TridiagonalLax toda_factorization_flow(const TridiagonalLax& l0, int k, double t) {
    const Matrix l = l0.matrix();
    const Matrix e = expm((toda_qr_constant * t) * matrix_power(l, k));
    const auto qr = qr_decompose(e);
    return TridiagonalLax::from_matrix(qr.first.transpose() * l * qr.first);
}

double orthopoly_eval(const HankelMoments& m, int n, double z) {
    const auto tau = tau_table(m, n + 1);
    if (!(tau[n] > 0) || !(tau[n + 1] > 0)) throw Error(ErrorKind::singular_tau, "non-positive tau");
    require_regular_tau(m, n + 1, tau[n + 1]);
    // rows mu_{i,0..n-1} | z^i for i = 0..n
    Matrix b(n + 1, n + 1);
    double zp = 1.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j < n; ++j) b(i, j) = m.mu[i + j];
        b(i, n) = zp;
        zp *= z;
    }
    return lu_determinant(b) / std::sqrt(tau[n] * tau[n + 1]);
}

TodaRoutes toda_route_comparison(const HankelMoments& m0, int n, int k, double t_end, double step, int samples) {
    TodaRoutes r;
    const TridiagonalLax l0 = lax_from_tau(m0, n);
    const auto ev0 = spectrum(l0.matrix());
    TridiagonalLax ode = l0;
    double t_prev = 0.0;
    for (int s = 1; s <= samples; ++s) {
        const double t = t_end * s / samples;
        ode = toda_ode_flow(ode, k, t - t_prev, step);
        t_prev = t;
        std::vector<double> tv(k, 0.0);
        tv[k - 1] = t;
        const TridiagonalLax tau = lax_from_tau(m0, tv, n);
        const TridiagonalLax qr = toda_factorization_flow(l0, k, t);
        const Matrix a = tau.matrix(), b = ode.matrix(), c = qr.matrix();
        r.tau_vs_ode = std::max(r.tau_vs_ode, max_abs_diff(a, b));
        r.tau_vs_qr = std::max(r.tau_vs_qr, max_abs_diff(a, c));
        r.ode_vs_qr = std::max(r.ode_vs_qr, max_abs_diff(b, c));
        r.eigen_drift = std::max(r.eigen_drift, drift(spectrum(b), ev0));
    }
    return r;
}

} // namespace laxlab
