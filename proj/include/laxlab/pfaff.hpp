#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/matrix.hpp"
#include "laxlab/quadrature.hpp"
#include "laxlab/weight.hpp"

#include <array>
#include <functional>
#include <vector>

namespace laxlab {

// Skew moment matrix <y^i, z^j>. alpha = -1 (beta = 1):
//   mu_ij = iint y^i z^j sign(z - y) rho(y) rho(z),
// alpha = +1 (beta = 4): mu_ij = int (y^i (y^j)' - (y^i)' y^j) rho = (j - i) M_{i+j-1}.
// Plain t: evolution multiplies each variable by e^{sum t_k y^k}, so for beta = 4 the
// weight picks up e^{2 sum t_k y^k}.
struct SkewMoments {
    Matrix m;
    int alpha = -1;
    WeightSpec w;
    IntervalUnion E;
    int size() const { return m.rows(); }
};

SkewMoments skew_inner_products(const WeightSpec& w, const IntervalUnion& e, int alpha, int size, int order = 0);
SkewMoments skew_from_matrix(const Matrix& m);
// <f, g> with the same construction, for arbitrary f, g (alpha = -1 uses nested quadrature)
double skew_inner(const WeightSpec& w, const IntervalUnion& e, int alpha, const std::function<double(double)>& f,
                  const std::function<double(double)>& fp, const std::function<double(double)>& g,
                  const std::function<double(double)>& gp, int order = 96);

// e^{sum t_k L^k} m e^{sum t_k L^Tk} with the truncated (nilpotent) shift, exact for the
// finite matrix. With size_out < size only the leading rows are kept, and a depth error is
// raised unless the moments beyond the matrix are negligible for them.
SkewMoments evolve_skew(const SkewMoments& m0, const std::vector<double>& t, int size_out = -1);

// tau[j] = tau_{2j} = pf of the leading 2j block
std::vector<double> pfaff_tau_table(const SkewMoments& m, int jmax);
// tau_{n2} as a jet in the increments of t_{times[0]}, ...
Jet pfaff_tau_jet(const SkewMoments& m, int n2, const std::vector<int>& times, int degree);

// L = Q Lambda Q^{-1} with Q = skew_borel(m)
Matrix pfaff_lax(const SkewMoments& m);
Matrix pfaff_lax_from_q(const Matrix& q);
// P+ a = (a_- - Ja_+) + (a_0 - Ja_0)/2, Ja = J a^T J
Matrix pfaff_p_plus(const Matrix& a);
Matrix pfaff_p_minus(const Matrix& a);

struct PfaffState {
    Matrix L;
    Matrix Q;
};
// RK4 for dL/dt = [-P+(L^k), L] together with dQ/dt = -P+(L^k) Q
PfaffState pfaff_ode_flow(const Matrix& l0, const Matrix& q0, int k, double t_end, double step);
// sup over the leading interior block of L(t): moment evolution vs the Lax ODE. The finite
// truncation is an exact instance of the lattice, so no padding is needed.
double pfaff_route_difference(const SkewMoments& m0, int k, double t, double step, int interior);

// q = Q chi(z)
double skew_orthopoly_eval(const SkewMoments& m, int n, double z);
// the same from tau_{2j}(t - [1/z]) and its t1 derivative
double skew_orthopoly_tau(const SkewMoments& m, int n, double z);

struct PfaffKpResult {
    double residual;
    // d1^4 F, 3 d2^2 F, -4 d1 d3 F, 6 (d1^2 F)^2, -12 tau_{n-2} tau_{n+2} / tau_n^2
    std::array<double, 5> terms;
};
PfaffKpResult pfaffkp_residual(const SkewMoments& m, int n);

} // namespace laxlab
