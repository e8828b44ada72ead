#pragma once

#include <memory>
#include <vector>

namespace laxlab {

// Monomial bookkeeping for truncated multivariate Taylor polynomials.
class JetSpace {
public:
    JetSpace(int nvar, int degree);

    int nvar() const { return nvar_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }

    const std::vector<int>& exponent(int k) const { return exps_[k]; }
    int total_degree(int k) const { return total_[k]; }
    // -1 if the exponent is outside the truncation
    int index(const std::vector<int>& e) const;

    struct Term {
        int a, b, c;
    };
    const std::vector<Term>& products() const { return mul_; }
    // index of e - unit(v), or -1
    int lowered(int k, int v) const { return lower_[static_cast<std::size_t>(k) * nvar_ + v]; }
    int raised(int k, int v) const { return raise_[static_cast<std::size_t>(k) * nvar_ + v]; }

private:
    int nvar_, degree_;
    std::vector<std::vector<int>> exps_;
    std::vector<int> total_;
    std::vector<Term> mul_;
    std::vector<int> lower_, raise_;
    std::vector<int> stride_;
    std::vector<int> lookup_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;
JetSpacePtr make_jet_space(int nvar, int degree);

// Truncated Taylor polynomial sum_e c_e d^e around a base point.
class Jet {
public:
    Jet() = default;
    explicit Jet(JetSpacePtr sp, double value = 0.0);
    static Jet variable(JetSpacePtr sp, int v, double value);

    const JetSpacePtr& space() const { return sp_; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    double coeff(int k) const { return c_[k]; }
    double& coeff(int k) { return c_[k]; }
    const std::vector<double>& coeffs() const { return c_; }
    // coefficient of a monomial
    double coeff(const std::vector<int>& e) const;
    // partial derivative value at the base point for a multi-index
    double derivative(const std::vector<int>& e) const;
    // d/d(var v), truncated one degree lower
    Jet partial(int v) const;
    // integral in var v from 0, dropping terms beyond the truncation
    Jet integrate(int v) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);
    Jet operator-() const;

private:
    JetSpacePtr sp_;
    std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

// sum_k a[k] (x - x(0))^k
Jet compose(const std::vector<double>& a, const Jet& x);
Jet reciprocal(const Jet& x);
Jet log(const Jet& x);
Jet exp(const Jet& x);
Jet sqrt(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet pow(const Jet& x, int k);
Jet pow(const Jet& x, double p);

inline double pivot_size(double x) { return x < 0 ? -x : x; }
inline double pivot_size(const Jet& x) { return pivot_size(x.value()); }

} // namespace laxlab
