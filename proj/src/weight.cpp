#include "laxlab/weight.hpp"

#include "laxlab/error.hpp"
#include "text.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace laxlab {


WeightSpec WeightSpec::gaussian(double b) {
    WeightSpec w{WeightFamily::gaussian, 0.0, b, {}};
    w.validate();
    return w;
}

WeightSpec WeightSpec::laguerre(double a, double b) {
    WeightSpec w{WeightFamily::laguerre, a, b, {}};
    w.validate();
    return w;
}

WeightSpec WeightSpec::uniform() { return WeightSpec{WeightFamily::uniform, 0.0, 0.0, {}}; }

WeightSpec WeightSpec::parse(const std::string& text) {
    const auto p = text::split(text, ':');
    if (p.empty()) throw Error(ErrorKind::usage, "empty weight");
    if (p[0] == "uniform" && p.size() == 1) return uniform();
    if (p[0] == "gaussian" && p.size() <= 2) return gaussian(p.size() == 2 ? text::number(p[1]) : 1.0);
    if (p[0] == "laguerre" && p.size() == 3) return laguerre(text::number(p[1]), text::number(p[2]));
    throw Error(ErrorKind::usage, "unknown weight '" + text + "' (gaussian:b, laguerre:a:b, uniform)");
}

void WeightSpec::validate() const {
    switch (family) {
    case WeightFamily::gaussian:
        if (!(b > 0)) throw Error(ErrorKind::domain, "gaussian weight needs b > 0");
        break;
    case WeightFamily::laguerre:
        if (!(a > -1) || !(b > 0)) throw Error(ErrorKind::domain, "laguerre weight needs a > -1, b > 0");
        break;
    default: break;
    }
}

namespace {

double time_exponent(const std::vector<double>& times, double z) {
    double v = 0, p = 1;
    for (double t : times) {
        p *= z;
        v += t * p;
    }
    return v;
}

} // namespace

double WeightSpec::deformation(double z) const { return std::exp(time_exponent(times, z)); }

WeightSpec WeightSpec::deformed(std::vector<double> t) const {
    WeightSpec w = *this;
    w.times = std::move(t);
    return w;
}

double WeightSpec::density(double z) const {
    switch (family) {
    // one exponent, so e^{-V} e^{sum t z^k} does not become 0 * inf far out
    case WeightFamily::gaussian: return std::exp(-b * z * z + time_exponent(times, z));
    case WeightFamily::laguerre: return z > 0 ? std::pow(z, a) * std::exp(-b * z + time_exponent(times, z)) : 0.0;
    case WeightFamily::uniform: return deformation(z);
    case WeightFamily::custom: break;
    }
    throw Error(ErrorKind::unsupported, "custom weights have no density");
}

Interval WeightSpec::support() const {
    const double inf = std::numeric_limits<double>::infinity();
    if (family == WeightFamily::laguerre) return {0.0, inf};
    return {-inf, inf};
}

double WeightSpec::scale() const {
    switch (family) {
    case WeightFamily::gaussian: return 1.0 / std::sqrt(b);
    case WeightFamily::laguerre: return 1.0 / b;
    default: return 0.0;
    }
}

std::string WeightSpec::str() const {
    std::ostringstream os;
    os.precision(17);
    switch (family) {
    case WeightFamily::gaussian: os << "gaussian:" << b; break;
    case WeightFamily::laguerre: os << "laguerre:" << a << ":" << b; break;
    case WeightFamily::uniform: os << "uniform"; break;
    case WeightFamily::custom: os << "custom"; break;
    }
    return os.str();
}

IntervalUnion clip_to_support(const WeightSpec& w, const IntervalUnion& e) {
    const Interval s = w.support();
    std::vector<Interval> out;
    for (const auto& p : e.pieces()) {
        const double lo = std::max(p.lo, s.lo), hi = std::min(p.hi, s.hi);
        if (hi > lo) out.push_back({lo, hi});
    }
    if (out.empty()) throw Error(ErrorKind::empty_domain, "interval set has no overlap with the weight support");
    return IntervalUnion(out);
}

QuadratureRule weighted_rule(const WeightSpec& w, const IntervalUnion& e, int order) {
    w.validate();
    const IntervalUnion ec = clip_to_support(w, e);
    if (w.family == WeightFamily::uniform && !ec.bounded())
        throw Error(ErrorKind::divergence, "uniform weight on an unbounded set");
    if (w.family == WeightFamily::custom) throw Error(ErrorKind::unsupported, "custom weights carry their own moments");
    QuadratureRule r;
    for (const auto& p : ec.pieces()) {
        QuadratureRule q;
        if (w.family == WeightFamily::laguerre && p.lo == 0.0 && w.a != std::floor(w.a)) {
            const double cut = std::min(p.hi, w.scale());
            q = gauss_jacobi_rule(order, 0.0, cut, w.a);
            for (std::size_t i = 0; i < q.nodes.size(); ++i) q.weights[i] *= std::exp(-w.b * q.nodes[i]) * w.deformation(q.nodes[i]);
            if (p.hi > cut) {
                QuadratureRule tail = mapped_rule(order, cut, p.hi, w.scale());
                for (std::size_t i = 0; i < tail.nodes.size(); ++i) tail.weights[i] *= w.density(tail.nodes[i]);
                q.append(tail);
            }
        } else {
            q = mapped_rule(order, p.lo, p.hi, w.scale());
            for (std::size_t i = 0; i < q.nodes.size(); ++i) q.weights[i] *= w.density(q.nodes[i]);
        }
        r.append(q);
    }
    return r;
}

} // namespace laxlab
