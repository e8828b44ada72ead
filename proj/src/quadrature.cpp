#include "laxlab/quadrature.hpp"

#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace laxlab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double parse_end(const std::string& s) {
    if (s == "inf" || s == "+inf") return inf;
    if (s == "-inf") return -inf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::usage, "bad interval endpoint '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::usage, "bad interval endpoint '" + s + "'");
    return v;
}

std::string fmt_end(double x) {
    if (x == inf) return "inf";
    if (x == -inf) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Reference Gauss-Legendre nodes on [-1,1], Newton on P_n in long double.
void legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const long double pi = 3.141592653589793238462643383279502884L;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double z = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0L;
            dp = n * (z * p1 - p0) / (z * z - 1.0L);
            const long double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        long double p0 = 1.0L, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0L;
        dp = n * (z * p1 - p0) / (z * z - 1.0L);
        const long double wi = 2.0L / ((1.0L - z * z) * dp * dp);
        x[i] = static_cast<double>(-z);
        x[n - 1 - i] = static_cast<double>(z);
        w[i] = w[n - 1 - i] = static_cast<double>(wi);
    }
    if (n % 2) x[n / 2] = 0.0;
}

} // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> pieces) {
    for (const auto& p : pieces) {
        if (std::isnan(p.lo) || std::isnan(p.hi)) throw Error(ErrorKind::domain, "NaN interval endpoint");
        if (p.hi < p.lo) throw Error(ErrorKind::domain, "interval with hi < lo");
        if (p.hi > p.lo) pieces_.push_back(p);
    }
    std::sort(pieces_.begin(), pieces_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].lo < pieces_[i - 1].hi) throw Error(ErrorKind::domain, "overlapping intervals");
}

IntervalUnion IntervalUnion::parse(const std::string& text) {
    std::vector<Interval> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::usage, "interval '" + item + "' is not a:b");
        out.push_back({parse_end(item.substr(0, colon)), parse_end(item.substr(colon + 1))});
    }
    return IntervalUnion(out);
}

bool IntervalUnion::bounded() const {
    for (const auto& p : pieces_)
        if (std::isinf(p.lo) || std::isinf(p.hi)) return false;
    return true;
}

bool IntervalUnion::contains(double x) const {
    for (const auto& p : pieces_)
        if (x >= p.lo && x <= p.hi) return true;
    return false;
}

std::vector<double> IntervalUnion::endpoints() const {
    std::vector<double> c;
    for (const auto& p : pieces_) {
        c.push_back(p.lo);
        c.push_back(p.hi);
    }
    return c;
}

IntervalUnion IntervalUnion::with_endpoints(const std::vector<double>& c) const {
    if (c.size() != 2 * pieces_.size()) throw Error(ErrorKind::dimension, "endpoint count mismatch");
    std::vector<Interval> p;
    for (std::size_t i = 0; i < pieces_.size(); ++i) p.push_back({c[2 * i], c[2 * i + 1]});
    return IntervalUnion(p);
}

std::string IntervalUnion::str() const {
    std::string s;
    for (const auto& p : pieces_) {
        if (!s.empty()) s += ",";
        s += fmt_end(p.lo) + ":" + fmt_end(p.hi);
    }
    return s;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
}

void QuadratureRule::append(const QuadratureRule& o) {
    nodes.insert(nodes.end(), o.nodes.begin(), o.nodes.end());
    weights.insert(weights.end(), o.weights.begin(), o.weights.end());
}

QuadratureRule gauss_legendre_rule(int order, double a, double b) {
    if (order < 1) throw Error(ErrorKind::dimension, "quadrature order must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorKind::unsupported_domain, "Gauss-Legendre on an infinite interval needs a mapped rule");
    std::vector<double> x, w;
    legendre_reference(order, x, w);
    QuadratureRule r;
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (int i = 0; i < order; ++i) {
        r.nodes.push_back(m + h * x[i]);
        r.weights.push_back(h * w[i]);
    }
    return r;
}

QuadratureRule mapped_rule(int order, double lo, double hi, double scale) {
    if (!(hi > lo)) return {};
    if (std::isfinite(lo) && std::isfinite(hi)) return gauss_legendre_rule(order, lo, hi);
    if (!(scale > 0)) throw Error(ErrorKind::unsupported_domain, "infinite interval needs a positive scale");
    QuadratureRule r;
    if (std::isinf(lo) && std::isinf(hi)) {
        r = mapped_rule(order, lo, 0.0, scale);
        r.append(mapped_rule(order, 0.0, hi, scale));
        return r;
    }
    if (std::isinf(hi) && lo < 0) {
        r = gauss_legendre_rule(order, lo, 0.0);
        r.append(mapped_rule(order, 0.0, hi, scale));
        return r;
    }
    if (std::isinf(lo) && hi > 0) {
        r = mapped_rule(order, lo, 0.0, scale);
        r.append(gauss_legendre_rule(order, 0.0, hi));
        return r;
    }
    std::vector<double> x, w;
    legendre_reference(order, x, w);
    const double anchor = std::isinf(hi) ? lo : hi;
    const double dir = std::isinf(hi) ? 1.0 : -1.0;
    for (int i = 0; i < order; ++i) {
        const double v = 0.5 * (x[i] + 1.0);
        const double u = anchor + dir * scale * v / (1.0 - v);
        const double du = scale / ((1.0 - v) * (1.0 - v));
        r.nodes.push_back(u);
        r.weights.push_back(0.5 * w[i] * du);
    }
    if (dir < 0) {
        std::reverse(r.nodes.begin(), r.nodes.end());
        std::reverse(r.weights.begin(), r.weights.end());
    }
    return r;
}

QuadratureRule union_rule(const IntervalUnion& e, int order, double scale) {
    QuadratureRule r;
    for (const auto& p : e.pieces()) r.append(mapped_rule(order, p.lo, p.hi, scale));
    return r;
}

namespace {

struct JacobiReference {
    std::vector<double> x, w;  // on [-1, 1], weight (1+x)^alpha
};

JacobiReference jacobi_reference(int order, double alpha) {
    // weight (1+x)^alpha on [-1,1]: Jacobi parameters (0, alpha)
    const double al = 0.0, be = alpha, s = al + be;
    std::vector<double> diag(order), off(order, 0.0);
    diag[0] = (be - al) / (s + 2.0);
    for (int k = 1; k < order; ++k) {
        const double t = 2.0 * k + s;
        diag[k] = (be * be - al * al) / (t * (t + 2.0));
        off[k - 1] = std::sqrt(4.0 * k * (k + al) * (k + be) * (k + s) / (t * t * (t + 1.0) * (t - 1.0)));
    }
    Matrix vec;
    JacobiReference r;
    r.x = tridiagonal_eigen(diag, off, &vec);
    const double mu0 = std::exp((s + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) + std::lgamma(be + 1.0) -
                                std::lgamma(s + 2.0));
    for (int i = 0; i < order; ++i) r.w.push_back(mu0 * vec(0, i) * vec(0, i));
    return r;
}

// nested quadratures ask for the same rule once per outer node
const JacobiReference& cached_jacobi_reference(int order, double alpha) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, JacobiReference> cache;
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_pair(order, alpha);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, jacobi_reference(order, alpha)).first;
    return it->second;
}

} // namespace

QuadratureRule gauss_jacobi_rule(int order, double a, double b, double alpha) {
    if (order < 1) throw Error(ErrorKind::dimension, "quadrature order must be positive");
    if (!(alpha > -1.0)) throw Error(ErrorKind::domain, "Jacobi exponent must exceed -1");
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
        throw Error(ErrorKind::unsupported_domain, "Gauss-Jacobi needs a finite interval");
    const auto& ref = cached_jacobi_reference(order, alpha);
    const double h = 0.5 * (b - a);
    const double jac = std::pow(h, alpha + 1.0);
    QuadratureRule r;
    for (int i = 0; i < order; ++i) {
        r.nodes.push_back(a + h * (ref.x[i] + 1.0));
        r.weights.push_back(jac * ref.w[i]);
    }
    return r;
}

} // namespace laxlab
