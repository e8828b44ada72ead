#pragma once

#include <functional>
#include <string>
#include <vector>

namespace laxlab {

struct Interval {
    double lo, hi;
};

// Disjoint union of closed intervals, endpoints possibly +-inf, kept sorted.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<Interval> pieces);
    // "a:b,c:d" with inf / -inf sentinels
    static IntervalUnion parse(const std::string& text);

    const std::vector<Interval>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    bool bounded() const;
    bool contains(double x) const;
    // endpoints in order, infinite ones included
    std::vector<double> endpoints() const;
    // same combinatorics, replaced endpoints (infinite ones are kept)
    IntervalUnion with_endpoints(const std::vector<double>& c) const;
    std::string str() const;

private:
    std::vector<Interval> pieces_;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const;
    void append(const QuadratureRule& o);
};

// Gauss-Legendre on a finite [a,b].
QuadratureRule gauss_legendre_rule(int order, double a, double b);
// Gauss-Legendre on [lo,hi]; infinite ends mapped by u = A + r v/(1-v).
// Pieces crossing 0 are split there first.
QuadratureRule mapped_rule(int order, double lo, double hi, double scale);
QuadratureRule union_rule(const IntervalUnion& e, int order, double scale);
// Gauss-Jacobi for the weight (y-a)^alpha on [a,b]; the weights include (y-a)^alpha.
QuadratureRule gauss_jacobi_rule(int order, double a, double b, double alpha);

} // namespace laxlab
