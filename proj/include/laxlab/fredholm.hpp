#pragma once

#include "laxlab/jet.hpp"
#include "laxlab/matrix.hpp"
#include "laxlab/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace laxlab {

enum class KernelKind { airy, bessel, sine, hermite };

struct KernelSpec {
    KernelKind kind = KernelKind::airy;
    double nu = 0.0;   // bessel
    int N = 0;         // hermite
    double b = 1.0;    // hermite weight e^{-b z^2}
    double lambda = 1.0;

    static KernelSpec airy(double lambda = 1.0);
    static KernelSpec bessel(double nu, double lambda = 1.0);
    static KernelSpec sine(double lambda = 1.0);
    static KernelSpec hermite(int N, double b = 1.0, double lambda = 1.0);
    // "airy", "bessel:nu", "sine", "hermite:N[:b]"
    static KernelSpec parse(const std::string& text);
    void validate() const;
    std::string str() const;
};

// airy: (Ai(y)Ai'(z) - Ai'(y)Ai(z))/(y - z), i.e. int_0^inf Ai(u+y)Ai(u+z) du
// bessel: (J(sy)sz J'(sz) - J(sz)sy J'(sy)) / (2(y - z)) with sy = sqrt(y), the positive kernel
// sine: sin pi(y - z) / (pi(y - z))
// hermite: sum_{k<N} phi_k(y) phi_k(z), phi_k orthonormal in L^2(dz) for weight e^{-b z^2}
double kernel_eval(const KernelSpec& k, double y, double z);

// orthonormal Hermite functions phi_0..phi_{N-1} at z
std::vector<double> hermite_functions(int N, double b, double z);

// Discretization of K restricted to E. Entries of the factored matrix are
// s_i K~(x_i, x_j) s_j, where K~ = K except for bessel, where the (xy)^{nu/2}
// factor moves into s (Gauss-Jacobi at a hard edge at 0).
struct NystromGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scale;
};

// Semi-infinite pieces (airy, hermite) are cut where the kernel is below 1e-18.
NystromGrid nystrom_grid(const KernelSpec& k, const IntervalUnion& e, int order);
// [s_i K(x_i, x_j) s_j]
Matrix nystrom_matrix(const KernelSpec& k, const IntervalUnion& e, int order);

// det(I - lambda K|_E), order nodes per piece
double nystrom_det(const KernelSpec& k, const IntervalUnion& e, int order = 64);

struct FredholmValue {
    double value;
    // |det(order) - det(2 order)|
    double error;
};
FredholmValue nystrom_det_checked(const KernelSpec& k, const IntervalUnion& e, int order = 64);

// log det(I - lambda K|_E) where every finite endpoint c of E is replaced by
// move(c), a jet. Only airy and bessel. Hard edge 0 for bessel stays fixed.
Jet fredholm_log_det_jet(const KernelSpec& k, const IntervalUnion& e, const std::function<Jet(double)>& move,
                         int order = 64);

enum class ScalingRegime { bulk, edge };
// sup over grid x grid of |rescaled K_N - limit kernel|, weight e^{-z^2}
double scaling_limit_error(int N, ScalingRegime regime, const std::vector<double>& grid);
// the rescaled finite-N kernel itself
double rescaled_hermite_kernel(int N, ScalingRegime regime, double y, double z);

} // namespace laxlab
