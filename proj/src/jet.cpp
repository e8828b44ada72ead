#include "laxlab/jet.hpp"

#include "laxlab/error.hpp"

#include <cmath>

namespace laxlab {

namespace {

void enumerate(int nvar, int degree, std::vector<std::vector<int>>& out) {
    for (int d = 0; d <= degree; ++d) {
        // all compositions of d into nvar parts, lexicographically descending in the first var
        std::vector<int> cur(nvar, 0);
        auto rec = [&](auto&& self, int v, int left) -> void {
            if (v == nvar - 1) {
                cur[v] = left;
                out.push_back(cur);
                return;
            }
            for (int k = left; k >= 0; --k) {
                cur[v] = k;
                self(self, v + 1, left - k);
            }
        };
        if (nvar == 0) {
            if (d == 0) out.push_back({});
            continue;
        }
        rec(rec, 0, d);
    }
}

void check_same(const Jet& a, const Jet& b) {
    if (a.space() != b.space()) throw Error(ErrorKind::dimension, "jets from different spaces");
}

} // namespace

JetSpace::JetSpace(int nvar, int degree) : nvar_(nvar), degree_(degree) {
    if (nvar < 0 || degree < 0) throw Error(ErrorKind::dimension, "bad jet space");
    enumerate(nvar, degree, exps_);
    stride_.assign(nvar, 1);
    std::size_t total_cells = 1;
    for (int v = 0; v < nvar; ++v) {
        stride_[v] = static_cast<int>(total_cells);
        total_cells *= static_cast<std::size_t>(degree + 1);
    }
    lookup_.assign(total_cells, -1);
    total_.resize(exps_.size());
    for (std::size_t k = 0; k < exps_.size(); ++k) {
        int t = 0, pos = 0;
        for (int v = 0; v < nvar; ++v) {
            t += exps_[k][v];
            pos += exps_[k][v] * stride_[v];
        }
        total_[k] = t;
        lookup_[pos] = static_cast<int>(k);
    }
    const int n = size();
    lower_.assign(static_cast<std::size_t>(n) * nvar, -1);
    raise_.assign(static_cast<std::size_t>(n) * nvar, -1);
    for (int k = 0; k < n; ++k) {
        for (int v = 0; v < nvar; ++v) {
            std::vector<int> e = exps_[k];
            if (e[v] > 0) {
                e[v] -= 1;
                lower_[static_cast<std::size_t>(k) * nvar + v] = index(e);
                e[v] += 1;
            }
            e[v] += 1;
            raise_[static_cast<std::size_t>(k) * nvar + v] = index(e);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (total_[a] + total_[b] > degree) continue;
            std::vector<int> e(nvar);
            for (int v = 0; v < nvar; ++v) e[v] = exps_[a][v] + exps_[b][v];
            mul_.push_back({a, b, index(e)});
        }
}

int JetSpace::index(const std::vector<int>& e) const {
    int t = 0, pos = 0;
    for (int v = 0; v < nvar_; ++v) {
        if (e[v] < 0) return -1;
        t += e[v];
        if (e[v] > degree_) return -1;
        pos += e[v] * stride_[v];
    }
    if (t > degree_) return -1;
    return lookup_[pos];
}

JetSpacePtr make_jet_space(int nvar, int degree) { return std::make_shared<const JetSpace>(nvar, degree); }

Jet::Jet(JetSpacePtr sp, double value) : sp_(std::move(sp)), c_(sp_->size(), 0.0) { c_[0] = value; }

Jet Jet::variable(JetSpacePtr sp, int v, double value) {
    Jet j(sp, value);
    if (sp->degree() >= 1) {
        std::vector<int> e(sp->nvar(), 0);
        e[v] = 1;
        j.c_[sp->index(e)] = 1.0;
    }
    return j;
}

double Jet::coeff(const std::vector<int>& e) const {
    const int k = sp_->index(e);
    return k < 0 ? 0.0 : c_[k];
}

double Jet::derivative(const std::vector<int>& e) const {
    double f = 1.0;
    for (int x : e)
        for (int q = 2; q <= x; ++q) f *= q;
    return f * coeff(e);
}

Jet Jet::partial(int v) const {
    Jet r(sp_, 0.0);
    for (int k = 0; k < sp_->size(); ++k) {
        const int e = sp_->exponent(k)[v];
        if (e == 0) continue;
        r.c_[sp_->lowered(k, v)] += e * c_[k];
    }
    return r;
}

Jet Jet::integrate(int v) const {
    Jet r(sp_, 0.0);
    for (int k = 0; k < sp_->size(); ++k) {
        const int up = sp_->raised(k, v);
        if (up < 0) continue;
        r.c_[up] = c_[k] / (sp_->exponent(k)[v] + 1);
    }
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    check_same(*this, o);
    std::vector<double> r(c_.size(), 0.0);
    for (const auto& t : sp_->products()) r[t.c] += c_[t.a] * o.c_[t.b];
    c_.swap(r);
    return *this;
}

Jet& Jet::operator/=(const Jet& o) { return *this *= reciprocal(o); }
Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}
Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}
Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}
Jet& Jet::operator/=(double s) {
    for (double& v : c_) v /= s;
    return *this;
}
Jet Jet::operator-() const {
    Jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b) {
    Jet r = a;
    return r *= b;
}
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet compose(const std::vector<double>& a, const Jet& x) {
    const int d = x.space()->degree();
    Jet r = x;
    r -= x.value();
    const int top = std::min<int>(d, static_cast<int>(a.size()) - 1);
    Jet acc(x.space(), top >= 0 ? a[top] : 0.0);
    for (int k = top - 1; k >= 0; --k) {
        acc *= r;
        acc += a[k];
    }
    return acc;
}

Jet reciprocal(const Jet& x) {
    const double x0 = x.value();
    if (x0 == 0.0) throw Error(ErrorKind::singular, "jet reciprocal of zero");
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    double p = 1.0 / x0;
    for (int k = 0; k <= d; ++k) {
        a[k] = (k % 2 ? -p : p);
        p /= x0;
    }
    return compose(a, x);
}

Jet log(const Jet& x) {
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw Error(ErrorKind::domain, "jet log of non-positive value");
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    a[0] = std::log(x0);
    double p = 1.0;
    for (int k = 1; k <= d; ++k) {
        p /= x0;
        a[k] = (k % 2 ? 1.0 : -1.0) * p / k;
    }
    return compose(a, x);
}

Jet exp(const Jet& x) {
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    a[0] = std::exp(x.value());
    for (int k = 1; k <= d; ++k) a[k] = a[k - 1] / k;
    return compose(a, x);
}

Jet pow(const Jet& x, double p) {
    const double x0 = x.value();
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    double binom = 1.0;
    for (int k = 0; k <= d; ++k) {
        a[k] = binom * std::pow(x0, p - k);
        binom *= (p - k) / (k + 1);
    }
    return compose(a, x);
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet sin(const Jet& x) {
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {s, c, -s, -c};
    double f = 1.0;
    for (int k = 0; k <= d; ++k) {
        if (k) f *= k;
        a[k] = cyc[k % 4] / f;
    }
    return compose(a, x);
}

Jet cos(const Jet& x) {
    const int d = x.space()->degree();
    std::vector<double> a(d + 1);
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {c, -s, -c, s};
    double f = 1.0;
    for (int k = 0; k <= d; ++k) {
        if (k) f *= k;
        a[k] = cyc[k % 4] / f;
    }
    return compose(a, x);
}

Jet pow(const Jet& x, int k) {
    Jet r(x.space(), 1.0);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace laxlab
