#pragma once

#include "laxlab/matrix.hpp"
#include "laxlab/tau.hpp"

#include <vector>

namespace laxlab {

// Symmetric tridiagonal Toda matrix; off[k] couples rows k and k+1.
struct TridiagonalLax {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
    Matrix matrix() const;
    static TridiagonalLax from_matrix(const Matrix& m);
    // band view with 1 on the subdiagonal and off^2 on the superdiagonal
    Matrix band_form() const;
};

// L at the point the moments describe: diag_k = d/dt1 log(tau_{k+1}/tau_k),
// off_k = sqrt(tau_k tau_{k+2}) / tau_{k+1}.
TridiagonalLax lax_from_tau(const HankelMoments& m, int n);
TridiagonalLax lax_from_tau(const HankelMoments& m0, const std::vector<double>& t, int n);

// skew part of X in the splitting skew + lower-with-diagonal
Matrix skew_part(const Matrix& x);
// right side of dL/dt_k
Matrix toda_vector_field(const Matrix& l, int k);
// RK4, step adjusted down so that it divides t_end
TridiagonalLax toda_ode_flow(const TridiagonalLax& l0, int k, double t_end, double step);

// exp(c t L0^k) = QR, L(t) = Q^T L0 Q
constexpr double toda_qr_constant = 0.5;
TridiagonalLax toda_factorization_flow(const TridiagonalLax& l0, int k, double t);

// p_n(z) orthonormal for the moment functional, from the bordered Hankel determinant
double orthopoly_eval(const HankelMoments& m, int n, double z);

struct TodaRoutes {
    double tau_vs_ode = 0;
    double tau_vs_qr = 0;
    double ode_vs_qr = 0;
    double eigen_drift = 0;
};
// sup over the time grid of pairwise route differences, starting from the moments m0
TodaRoutes toda_route_comparison(const HankelMoments& m0, int n, int k, double t_end, double step,
                                 int samples);

} // namespace laxlab
