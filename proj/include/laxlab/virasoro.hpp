#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/quadrature.hpp"
#include "laxlab/weight.hpp"

#include <functional>
#include <map>
#include <vector>

namespace laxlab {

// -rho'/rho = g/f with f = sum a_i z^i, g = sum b_i z^i
struct VirasoroWeightData {
    std::vector<double> a, b;
    // f rho z^k -> 0 at the ends of the support (k up to 8, checked numerically)
    bool boundary_decay = false;
};

VirasoroWeightData weight_to_fg(const WeightSpec& w);

// Currents j_k = d/dt_k (k > 0), j_{-l} = (l/beta) t_l, j_0 = n.
//   J1_k = j_k
//   J2_k = (beta/2) sum_{i+j=k} :j_i j_j: + (1 - beta/2)(k+1) j_k   (derivatives to the right)
// beta = 2, n = 0 gives the plain operators; beta = 2 with n gives J2 + 2n J1 + n^2 delta_k0.
struct JOperator {
    enum class Kind { J1, J2 };
    Kind kind = Kind::J1;
    double beta = 2;
    double n = 0;

    static JOperator plain1() { return {Kind::J1, 2, 0}; }
    static JOperator plain2() { return {Kind::J2, 2, 0}; }
    static JOperator beta1(double beta, double n) { return {Kind::J1, beta, n}; }
    static JOperator beta2(double beta, double n) { return {Kind::J2, beta, n}; }
};

// tau(t + d) as a jet of degree >= 2 in d_1..d_K
using TauSupplier = std::function<Jet(const std::vector<double>& t)>;

// The operator applied to tau (not log tau) at t. Times past t.size() are 0; a needed
// derivative index past K raises a truncation error.
double j_apply(const JOperator& op, int k, const TauSupplier& tau, const std::vector<double>& t);

// I_n(t) = int_{E^n} |Delta(z)|^beta prod e^{sum t_k z_k^k} rho(z_k) dz as a jet in d_1..d_K
// (Hankel determinant for beta = 2, Pfaffians for beta = 1 (n even) and 4). Fixed quadrature
// order so the value is smooth in the endpoints.
Jet integral_jet(const WeightSpec& w, int beta, const IntervalUnion& E, int n, const std::vector<double>& t, int K,
                 int order = 160);

struct VirasoroResidual {
    double residual;            // |sum| / max |term|
    std::vector<double> terms;  // -B_k I, then a_i J2_{k+i} I, then -b_i J1_{k+i+1} I
};

// (-sum_i c_i^{k+1} f(c_i) d/dc_i + sum_i (a_i J2_{k+i,n} - b_i J1_{k+i+1,n})) I_n = 0.
// Boundary part by central differences in the finite endpoints, absent when E is the support.
VirasoroResidual virasoro_residual(const WeightSpec& w, int beta, const IntervalUnion& E, int n, int k,
                                   const std::vector<double>& t);

// Sparse polynomial in t_1, t_2, ...: exponent vector (trailing zeros trimmed) -> coefficient
using TimePolynomial = std::map<std::vector<int>, double>;

TimePolynomial j_apply_poly(const JOperator& op, int k, const TimePolynomial& p);

// max over random polynomials in t_1..t_6 of degree <= 6 of
// |([J_k, J_l] - (k - l) J_{k+l} - c (k^3 - k)/12 delta_{k,-l}) p| / max|coefficient of J_k J_l p|,
// J = J2 at (beta, n), c = 13 - 3 beta - 12/beta
double virasoro_commutator_check(double beta, int k, int l, double n, int samples = 4, unsigned seed = 1);
double central_charge(double beta);

} // namespace laxlab
