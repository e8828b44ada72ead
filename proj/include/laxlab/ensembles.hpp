#pragma once

#include "laxlab/gapodes.hpp"
#include "laxlab/jet.hpp"
#include "laxlab/quadrature.hpp"
#include "laxlab/weight.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace laxlab {

struct EnsembleSpec {
    int beta = 2;
    WeightSpec w = WeightSpec::gaussian(1.0);
    int n = 1;
    // the probability routes also need even n at beta = 1
    void validate() const;
    // enough for sampling
    void validate_matrix() const;
};

// P_n(E) = int_{E^n} |Delta|^beta prod rho / int_{F^n} |Delta|^beta prod rho.
// beta = 2: Hankel determinants; beta = 1 (even n), 4: Pfaffians of skew moments.
double gap_probability(const EnsembleSpec& e, const IntervalUnion& E, int order = 0);

// beta = 2 second route: det [int_E p_i p_j rho], p_k orthonormal for rho on the whole
// support from the classical three-term recurrences
double gap_probability_gram(const EnsembleSpec& e, const IntervalUnion& E, int order = 96);

// Moments M_0..M_kmax of rho over E where each finite endpoint c of E is
// replaced by move(c), a jet. Endpoints at the edge of the support stay fixed.
std::vector<Jet> moment_jets(const WeightSpec& w, const IntervalUnion& E, const std::function<Jet(double)>& move,
                             int kmax);

// P_n(max eigenvalue <= x + d) as a jet in d, E = support cut at x
Jet gap_probability_jet(const EnsembleSpec& e, double x, int degree);
// beta = 2 or 4 with all finite endpoints of E moving
Jet gap_probability_jet(const EnsembleSpec& e, const IntervalUnion& E, const std::function<Jet(double)>& move);

// P suppliers for the gapodes equations (gaussian or laguerre weights)
GapSupplier gap_supplier(int beta, const WeightSpec& w);
// beta = 2 or 4 only
SetGapSupplier set_gap_supplier(int beta, const WeightSpec& w);

// The single boundary point equation relating P_{n -+ index} to derivatives of P_n,
// normalized residual per x
std::vector<double> inductive_relation_residual(const EnsembleSpec& e, const std::vector<double>& x_grid);
// The same relation for a general E (beta = 2 or 4)
double inductive_relation_residual(const EnsembleSpec& e, const IntervalUnion& E);

// Counter-based streams: sample i depends only on (seed, i).
std::uint64_t splitmix64(std::uint64_t x);

struct SampleBatch {
    std::uint64_t seed = 0;
    int count = 0;
    int n = 0;
    // count x n eigenvalues, each tuple sorted ascending
    std::vector<double> eigenvalues;
    const double* sample(int i) const { return eigenvalues.data() + static_cast<std::size_t>(i) * n; }
};

// Gaussian: GOE/GUE/GSE with density e^{-b tr M^2}. Laguerre: A^* A, A with m rows of
// real/complex/quaternion N(0, 1/2b) entries; z^a needs an integer m (beta = 1: a = (m-n-1)/2,
// 2: a = m - n, 4: a = 2(m - n) + 1). GSE Kramers pairs are reported once.
// threads <= 0 reads LAXLAB_THREADS (default 1); the result does not depend on it.
SampleBatch sample_ensemble(const EnsembleSpec& e, int count, std::uint64_t seed, int threads = 0);
std::vector<double> sample_eigenvalues(const EnsembleSpec& e, std::uint64_t seed, std::uint64_t index);

// (fraction of samples with every eigenvalue in E, binomial standard error)
std::pair<double, double> empirical_gap(const SampleBatch& batch, const IntervalUnion& E);

int default_thread_count();

} // namespace laxlab
