#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/quadrature.hpp"

#include <functional>
#include <vector>

namespace laxlab {

// f(c_1..c_m) near a base list of endpoints, with an evaluation noise bound.
struct BoundaryFunction {
    std::function<double(const std::vector<double>&)> f;
    std::vector<double> endpoints;
    double noise = 1e-15;
    int order = 0;  // derivative order already applied

    double operator()(const std::vector<double>& c) const { return f(c); }
    double value() const { return f(endpoints); }
};

// First order boundary operators sum_i g(c_i) d/dc_i.
//   airy(n):       g = c^{(n-1)/2}
//   bessel(n):     g = c^{(n+1)/2}
//   weighted(k, w): g = c^{k+1} w(c)
struct BoundaryOperator {
    enum class Kind { airy, bessel, weighted };
    Kind kind = Kind::airy;
    int n = 1;
    std::function<double(double)> weight;

    static BoundaryOperator airy(int n_odd);
    static BoundaryOperator bessel(int n_odd);
    static BoundaryOperator weighted(int k, std::function<double(double)> w);
    double coefficient(double c) const;
};

// Central differences along the direction (g(c_1), .., g(c_m)), one Richardson step,
// h = max(1e-2, noise^(1/(order+1))). Composable up to total order 4.
BoundaryFunction boundary_op(const BoundaryOperator& op, const BoundaryFunction& F);

// R = d/dA log det(I - K_airy on (A, inf)); R''' - 4AR' + 2R + 6R'^2, normalized
std::vector<double> pii_residual(const std::vector<double>& s_grid, int order = 64);
// R = -A d/dA log det(I - K_bessel on (0, A));
// A^2R''' + AR'' + (A - nu^2)R' - R/2 + 4RR' - 6AR'^2, normalized
std::vector<double> pv_residual(double nu, const std::vector<double>& A_grid, int order = 64);

// Boundary operator values on F = log det(I - K|_E), derivatives taken exactly.
struct AiryBoundaryValues {
    double a1, a1a1, a1a1a1a1, a3a1;  // A1 F, A1^2 F, A1^4 F, A3 A1 F
};
struct BesselBoundaryValues {
    double a1, a1a1, a1a1a1, a1a1a1a1, a3, a3a1;
};
AiryBoundaryValues airy_boundary_values(const IntervalUnion& E, int order = 64);
BesselBoundaryValues bessel_boundary_values(double nu, const IntervalUnion& E, int order = 64);

// (A1^3 - 4(A3 - 1/2))R + 6(A1 R)^2 with R = A1 log det(I - K_airy|_E), normalized
double airy_pde_residual(const IntervalUnion& E, int order = 64);
// (A1^4 - 2A1^3 + (1-nu^2)A1^2 + A3(A1 - 1/2))F - 4(A1F)(A1^2F) + 6(A1^2F)^2, normalized
double bessel_pde_residual(double nu, const IntervalUnion& E, int order = 64);

enum class EnsembleFamily { gaussian, laguerre };

struct QCoefficients {
    EnsembleFamily family = EnsembleFamily::gaussian;
    double n = 1;
    int beta = 2;
    double a = 0, b = 1;
    double delta = 0;  // 0 at beta = 2, 1 at beta = 1, 4
    int index = 1;     // P_{n -+ index} on the left side: 2 for beta = 1, 1 for beta = 4
    double Q = 0, Q2 = 0, Q1 = 0, Q0 = 0, Qm1 = 0;  // Q0, Qm1 laguerre only
    // |Q_i(-2n, 1, -a/2, -b/2) - Q_i(n, 4, a, b)| over all coefficients is below 1e-12
    bool duality_holds = false;
};

// n is real so the duality substitution n -> -2n can be evaluated
QCoefficients q_coefficients(EnsembleFamily family, double n, int beta, double a, double b);
// max_i |Q_i(-2n, 1, -a/2, -b/2) - Q_i(n, 4, a, b)|
double duality_gap(EnsembleFamily family, double n, double a, double b);

// P_n(max eigenvalue <= x + d) as a jet of the given degree in d. n = 0 is never requested.
using GapSupplier = std::function<Jet(int n, double x, int degree)>;
// P_n(E) with every finite endpoint c of E replaced by move(c)
using SetGapSupplier = std::function<Jet(int n, const IntervalUnion& E, const std::function<Jet(double)>& move)>;

// Single boundary point x. Gaussian: f = d/dx log P_n,
//   f''' + 6f'^2 + (4b^2x^2(delta-2)/beta + Q2)f' - 4b^2x(delta-2)/beta f = delta Q (P_{n-i}P_{n+i}/P_n^2 - 1).
// Laguerre: f = x d/dx log P_n, the x^3 f''' equation. Normalized residual per grid point.
std::vector<double> beta_ode_residual(EnsembleFamily family, int beta, int n, double a, double b,
                                      const std::vector<double>& x_grid, const GapSupplier& P);
// Same equation written with the boundary operators B_k on a general E (the PDE).
double beta_pde_residual(EnsembleFamily family, int beta, int n, double a, double b, const IntervalUnion& E,
                         const SetGapSupplier& P);

// Boundary operator values on F = log P_n. Gaussian B_k = sum c^{k+1} d/dc, Laguerre sum c^{k+2} d/dc.
struct BetaBoundaryValues {
    double bm1[5];  // B_{-1}^k F, k = 0..4 (k = 0 is F)
    double b0, b0b0, b1, b1bm1, b0bm1;
};
// logP is log P_n(E) evaluated through beta_boundary_flow
BetaBoundaryValues beta_boundary_values(const Jet& logP);
// endpoint map carrying the flows: 3 jet variables (B_{-1}, B_0, B_1 directions)
std::function<Jet(double)> beta_boundary_flow(EnsembleFamily family);

} // namespace laxlab
