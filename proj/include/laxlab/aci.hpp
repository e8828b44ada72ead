#pragma once

#include "laxlab/matrix.hpp"

#include <map>
#include <utility>
#include <vector>

namespace laxlab {

// a(h) = sum_j a_j h^j with a_m = diag(alpha) and diag(a_{m-1}) = gamma
struct LaxPolynomial {
    std::vector<Matrix> a;
    std::vector<double> alpha, gamma;

    int degree() const { return static_cast<int>(a.size()) - 1; }
    int size() const { return static_cast<int>(alpha.size()); }
    Matrix at(double h) const;
    // largest |diag(a_{m-1}) - gamma| and |a_m - alpha|
    double manifold_defect() const;
};

enum class SystemKind { euler, geodesic, neumann, central_force };
// f(x) = 2/3 x^{3/2}, ln x, x^2/2
enum class FKind { three_halves, log, quadratic };

FKind hamiltonian_kind(SystemKind k);

// euler:          alpha h + G_xy
// geodesic/neumann: alpha h^2 + h G_xy - x x^T
// central_force:  alpha h^2 + h G_xy + (x y^T + y x^T) - alpha
// G_xy = x y^T - y x^T; gamma is added on the diagonal of the h^{m-1} coefficient.
LaxPolynomial build_system(SystemKind kind, const std::vector<double>& alpha, const std::vector<double>& gamma,
                           const std::vector<double>& x, const std::vector<double>& y);

// b_ij = (beta_i - beta_j)/(alpha_i - alpha_j) (a_{m-1})_ij off the diagonal, gamma_i f''(alpha_i) on it
Matrix b_from_a(const LaxPolynomial& a, FKind f);
std::vector<double> f_prime(FKind f, const std::vector<double>& alpha);

// da/dt = [a, b + beta h], coefficientwise
std::vector<Matrix> aci_vector_field(const LaxPolynomial& a, FKind f);
// RK4 with b recomputed at every stage; step adjusted down to divide t_end
LaxPolynomial aci_flow(const LaxPolynomial& a0, FKind f, double t_end, double step);

// det(z I - a(h)) = sum q_{kl} h^k z^l
struct SpectralCurve {
    std::map<std::pair<int, int>, double> q;
    bool conditioning_warning = false;  // N > 6
    double coeff(int k, int l) const;
};
SpectralCurve spectral_curve_coeffs(const LaxPolynomial& a);
// max |q - q'| relative to max |q|
double spectral_curve_drift(const SpectralCurve& a, const SpectralCurve& b);

// max coefficient difference between flow_2(flow_1(a0)) and flow_1(flow_2(a0)), each for time t_small
double commutativity_report(const LaxPolynomial& a0, FKind f1, FKind f2, double t_small, double step = 1e-3);

// largest 2x2 minor over max |entry|^2; zero for rank <= 1
double rank_one_defect(const Matrix& m);

} // namespace laxlab
