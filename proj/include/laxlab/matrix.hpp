#pragma once

#include <initializer_list>
#include <vector>

namespace laxlab {

// Dense real matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);
    static Matrix diag(const std::vector<double>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

    Matrix transpose() const;
    Matrix block(int r0, int c0, int nr, int nc) const;

    // max row sum
    double norm_inf() const;
    double max_abs() const;
    double trace() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);
std::vector<double> operator*(const Matrix& a, const std::vector<double>& x);

Matrix commutator(const Matrix& a, const Matrix& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

// The 2n x 2n block-diagonal J with [[0,1],[-1,0]] blocks.
Matrix symplectic_j(int n2);
// Upper shift: (Lambda)_{i,i+1} = 1.
Matrix shift_matrix(int n);

} // namespace laxlab
