#pragma once

#include "laxlab/quadrature.hpp"

#include <string>
#include <vector>

namespace laxlab {

enum class WeightFamily { gaussian, laguerre, uniform, custom };

// rho(z) = e^{-V(z)}: gaussian e^{-b z^2} on R, laguerre z^a e^{-b z} on (0,inf), uniform 1.
struct WeightSpec {
    WeightFamily family = WeightFamily::uniform;
    double a = 0.0;
    double b = 1.0;
    // optional deformation rho(z) e^{sum_k t_k z^k}; times[0] is t_1
    std::vector<double> times;

    static WeightSpec gaussian(double b);
    static WeightSpec laguerre(double a, double b);
    static WeightSpec uniform();
    // "gaussian:b", "laguerre:a:b", "uniform"
    static WeightSpec parse(const std::string& text);

    void validate() const;
    double density(double z) const;
    // e^{sum_k t_k z^k}, 1 when no times are set
    double deformation(double z) const;
    WeightSpec deformed(std::vector<double> t) const;
    // natural support of the weight
    Interval support() const;
    // decay length used by the semi-infinite map
    double scale() const;
    std::string str() const;
};

// E intersected with the support; throws empty-domain if nothing is left.
IntervalUnion clip_to_support(const WeightSpec& w, const IntervalUnion& e);
// Quadrature whose weights already include rho; Laguerre pieces touching 0 use Gauss-Jacobi.
QuadratureRule weighted_rule(const WeightSpec& w, const IntervalUnion& e, int order);

} // namespace laxlab
