#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/matrix.hpp"
#include "laxlab/quadrature.hpp"

#include <array>
#include <functional>
#include <vector>

namespace laxlab {

// mu_ij = <y^i, z^j> = iint_{E1 x E2} y^i z^j e^{-(y^2+z^2)/2 + c y z} dy dz
struct BiMoments {
    Matrix m;
    double c = 0;
    IntervalUnion E1, E2;
    int size() const { return m.rows(); }
};

// Tensor Gauss rules, fixed order per piece so the result is smooth in c and the endpoints.
BiMoments bimoments(double c, const IntervalUnion& E1, const IntervalUnion& E2, int N, int order = 96);
// |mu(order) - mu(2 order)| over the matrix, relative to max |mu|
double bimoment_quadrature_error(double c, const IntervalUnion& E1, const IntervalUnion& E2, int N, int order = 96);
BiMoments bimoments_from_matrix(const Matrix& m);

// e^{sum t_k Lambda^k} m e^{-sum s_k Lambda^T k} on the finite matrix. With size_out < N only the
// leading block is kept and a depth error is raised unless the cut series terms are negligible.
BiMoments evolve_bimoments(const BiMoments& m0, const std::vector<double>& t, const std::vector<double>& s,
                           int size_out = -1);

// tau_0 = 1, tau_n = det of the leading n x n block (the n! of the integral is left out)
std::vector<double> tau2_table(const BiMoments& m, int nmax);

// m = S1^{-1} S2 with S1 unit lower, S2 upper with diagonal h. Raises singular-tau when a leading
// minor is negligible against its Hadamard bound (c = 0 gives a rank one moment matrix).
struct BiOrthogonal {
    Matrix p1, p2;  // row n: coefficients of the monic p^(1)_n, p^(2)_n in ascending powers
    std::vector<double> h;
};
BiOrthogonal biorthogonalize(const BiMoments& m, int n);
// which = 1 or 2
double biorthopoly_eval(const BiMoments& m, int which, int n, double z);
// sum_{j<n} p1_j(y) p2_j(z) / h_j
double cd_kernel(const BiMoments& m, int n, double y, double z);

// tau_n(t + d, s + e) as a jet of the given degree in (d_{t_1}, .., e_{s_1}, ..)
Jet tau2_jet(const BiMoments& m, int n, const std::vector<int>& t_times, const std::vector<int>& s_times, int degree);

struct WronskianResult {
    double s_identity;  // -d_{s1} log(tau_{n+1}/tau_{n-1}) = d_{t1}d_{s2} log tau_n / d_{t1}d_{s1} log tau_n
    double t_identity;  //  d_{t1} log(tau_{n+1}/tau_{n-1}) = d_{s1}d_{t2} log tau_n / d_{t1}d_{s1} log tau_n
    double wronskian;   // {f_{t1 s2}, f_{t1 s1}}_{t1} + {f_{s1 t2}, f_{t1 s1}}_{s1} = 0
    double denominator; // |d_{t1}d_{s1} log tau_n|
    bool small_denominator = false;  // below 1e-6
};
// Normalized residuals at (t, s) = (0, 0), derivatives exact through jets.
WronskianResult wronskian_identity_residual(const BiMoments& m, int n);

// KP in t (or in s with which = 2) for tau_n of the bimoment matrix, normalized
double bimoment_kp_residual(const BiMoments& m, int n, int which = 1);

// Point p = (a, b, c). First order operators sum v_i(p) d/dp_i.
using Field3 = std::function<std::array<double, 3>(const std::array<double, 3>&)>;
using Function3 = std::function<double(const std::array<double, 3>&)>;

struct CoupledOperators {
    // A1 = (d_a + c d_b)/(c^2-1), B1 = (c d_a + d_b)/(1-c^2), A2 = a d_a - c d_c, B2 = b d_b - c d_c
    static Field3 A1();
    static Field3 B1();
    static Field3 A2();
    static Field3 B2();
};

// X f by central differences along v(p), one Richardson step. noise is the absolute evaluation
// noise of f; the result carries noise * 3 / h.
struct FdFunction {
    Function3 f;
    double noise = 1e-15;
};
FdFunction fd_apply(const Field3& X, const FdFunction& f, double h = 1e-2);
// X(Y f) - Y(X f) at p
double fd_bracket(const Field3& X, const Field3& Y, const Function3& f, const std::array<double, 3>& p,
                  double h = 1e-2);

// P_n((-inf, a] x (-inf, b]) for the coupled Gaussian with coupling c
double coupled_gap_probability(int n, double a, double b, double c, int order = 96);

struct CoupledPdeResult {
    double residual;         // |signed_residual|
    double lhs, rhs;         // {B2A1F, B1A1F + c/(c^2-1)}_{A1}, {A2B1F, A1B1F + c/(c^2-1)}_{B1}
    double signed_residual;  // (lhs - rhs) / largest of the four products
};
// F = (1/n) log P_n, {f, g}_X = g Xf - f Xg
CoupledPdeResult coupled_pde_residual(double c, double a, double b, int n);

} // namespace laxlab
