#include "laxlab/matrix.hpp"

#include "laxlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace laxlab {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::symmetry: return "symmetry error";
    case ErrorKind::not_positive_definite: return "not-positive-definite error";
    case ErrorKind::degenerate_flag: return "degenerate-flag error";
    case ErrorKind::singular: return "singular error";
    case ErrorKind::unsupported_domain: return "unsupported-domain error";
    case ErrorKind::empty_domain: return "empty-domain error";
    case ErrorKind::divergence: return "divergence error";
    case ErrorKind::depth: return "depth error";
    case ErrorKind::singular_tau: return "singular-tau error";
    case ErrorKind::stability: return "stability error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::precision: return "precision error";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::underflow: return "underflow error";
    case ErrorKind::degeneracy: return "degeneracy error";
    case ErrorKind::usage: return "usage error";
    }
    return "error";
}

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw Error(ErrorKind::dimension, "negative matrix size");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw Error(ErrorKind::dimension, "ragged initializer");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
        throw Error(ErrorKind::dimension, "block out of range");
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

double Matrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : a_) best = std::max(best, std::abs(v));
    return best;
}

double Matrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorKind::dimension, "size mismatch in +");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorKind::dimension, "size mismatch in -");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::dimension, "size mismatch in *");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> operator*(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<int>(x.size())) throw Error(ErrorKind::dimension, "size mismatch in Ax");
    std::vector<double> y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::dimension, "size mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
    return d;
}

Matrix symplectic_j(int n2) {
    if (n2 % 2) throw Error(ErrorKind::dimension, "J needs even size");
    Matrix j(n2, n2);
    for (int k = 0; k < n2; k += 2) {
        j(k, k + 1) = 1.0;
        j(k + 1, k) = -1.0;
    }
    return j;
}

Matrix shift_matrix(int n) {
    Matrix s(n, n);
    for (int i = 0; i + 1 < n; ++i) s(i, i + 1) = 1.0;
    return s;
}

} // namespace laxlab
