#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/matrix.hpp"
#include "laxlab/quadrature.hpp"
#include "laxlab/weight.hpp"

#include <array>
#include <vector>

namespace laxlab {

// mu_0..mu_M of a one-dimensional weight; the Hankel matrix is (mu_{i+j}).
struct HankelMoments {
    std::vector<double> mu;
    IntervalUnion E;
    int max_index() const { return static_cast<int>(mu.size()) - 1; }
};

// Moments by quadrature, order doubled from 32 until the change is below 1e-12 relative.
HankelMoments hankel_moments(const WeightSpec& w, const IntervalUnion& e, int M, int order = 0);
HankelMoments moments_from_sequence(std::vector<double> mu);
// mu_m = sum_i w_i x_i^m
HankelMoments discrete_moments(const std::vector<double>& x, const std::vector<double>& w, int M);

// Coefficients c_0..c_depth of z^j in exp(sum_k t_k z^k); t[0] is t_1.
std::vector<double> exp_series(const std::vector<double>& t, int depth);

// Moments of e^{sum t_k z^k} rho, mu_m(t) = sum_j c_j mu_{m+j}. Uses every available moment and
// raises a depth error when the neglected tail is not below 1e-13 of the sum. m_out < 0 keeps
// as many moments as the depth allows (at least 12 shifts per nonzero time).
HankelMoments evolve_hankel(const HankelMoments& m0, const std::vector<double>& t, int m_out = -1);

Matrix hankel_matrix(const HankelMoments& m, int n, int shift = 0);
// tau_0 = 1, tau_n = det(mu_{i+j})_{i,j<n}
std::vector<double> tau_table(const HankelMoments& m, int nmax);

// tau_n as a jet in the increments of t_{times[0]}, t_{times[1]}, ... (1-based time indices)
Jet tau_jet(const HankelMoments& m, int n, const std::vector<int>& times, int degree);

// Derivative of log tau_n; alpha[k-1] is the order in t_k. Exact through jets.
double dlog_tau(const HankelMoments& m, int n, const std::vector<int>& alpha);
// d/dt_k log tau_n = tr(m_n^{-1} dm_n/dt_k)
double dlog_tau_trace(const HankelMoments& m, int n, int k);
// Richardson-extrapolated central differences on evolved moments
double dlog_tau_fd(const HankelMoments& m, int n, const std::vector<int>& alpha, double h = 1e-2);

struct KpResult {
    double residual;
    // d1^4 F, 3 d2^2 F, -4 d1 d3 F, 6 (d1^2 F)^2
    std::array<double, 4> terms;
};
KpResult kp_residual(const HankelMoments& m, int n);

// singular-tau check relative to the Hadamard bound of the leading block
void require_regular_tau(const HankelMoments& m, int n, double tau);

} // namespace laxlab
