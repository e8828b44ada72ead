#pragma once

#include "laxlab/error.hpp"
#include "laxlab/jet.hpp"
#include "laxlab/matrix.hpp"

#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

namespace laxlab {

inline double constant_like(double, double v) { return v; }
inline Jet constant_like(const Jet& proto, double v) { return Jet(proto.space(), v); }

template <class T>
T empty_product() {
    if constexpr (std::is_same_v<T, double>) {
        return 1.0;
    } else {
        throw Error(ErrorKind::dimension, "empty jet matrix has no space");
    }
}

// Determinant of an n x n row-major array by partially pivoted elimination.
// Pivots compare the base-point value, so the same code runs on jets.
template <class T>
T determinant_of(std::vector<T> a, int n) {
    if (n == 0) return empty_product<T>();
    T det = constant_like(a[0], 1.0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = pivot_size(a[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double s = pivot_size(a[static_cast<std::size_t>(i) * n + k]);
            if (s > best) {
                best = s;
                p = i;
            }
        }
        if (best == 0.0) return constant_like(a[0], 0.0);
        if (p != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(p) * n + j], a[static_cast<std::size_t>(k) * n + j]);
            det = -det;
        }
        const T piv = a[static_cast<std::size_t>(k) * n + k];
        det *= piv;
        const T inv = 1.0 / piv;
        for (int i = k + 1; i < n; ++i) {
            const T f = a[static_cast<std::size_t>(i) * n + k] * inv;
            for (int j = k + 1; j < n; ++j)
                a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(k) * n + j];
        }
    }
    return det;
}

// Pfaffian of an even skew-symmetric array, Parlett-Reid elimination with
// pivoting. pf([[0,1],[-1,0]]) = +1.
template <class T>
T pfaffian_of(std::vector<T> a, int n) {
    if (n == 0) return empty_product<T>();
    auto at = [&](int i, int j) -> T& { return a[static_cast<std::size_t>(i) * n + j]; };
    T pf = constant_like(a[0], 1.0);
    for (int k = 0; k + 1 < n; k += 2) {
        int p = k + 1;
        double best = pivot_size(at(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            const double s = pivot_size(at(i, k));
            if (s > best) {
                best = s;
                p = i;
            }
        }
        if (best == 0.0) return constant_like(a[0], 0.0);
        if (p != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(at(k + 1, j), at(p, j));
            for (int i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, p));
            pf = -pf;
        }
        pf *= at(k, k + 1);
        if (k + 2 < n) {
            const T inv = 1.0 / at(k, k + 1);
            std::vector<T> tau, col;
            tau.reserve(n - k - 2);
            col.reserve(n - k - 2);
            for (int i = k + 2; i < n; ++i) {
                tau.push_back(at(k, i) * inv);
                col.push_back(at(i, k + 1));
            }
            for (int i = k + 2; i < n; ++i)
                for (int j = k + 2; j < n; ++j)
                    at(i, j) += tau[i - k - 2] * col[j - k - 2] - col[i - k - 2] * tau[j - k - 2];
        }
    }
    return pf;
}

double lu_determinant(const Matrix& m);
double pfaffian(const Matrix& m);

bool is_symmetric(const Matrix& m, double rel = 1e-12);
bool is_skew(const Matrix& m, double rel = 1e-12);

// S = L^{-1} with m = L L^T; S m S^T = I.
Matrix cholesky_borel(const Matrix& m);
// Q lower with 2x2 diagonal blocks proportional to Id and Q m Q^T = J.
Matrix skew_borel(const Matrix& m);
// m = Q R, R with positive diagonal.
std::pair<Matrix, Matrix> qr_decompose(const Matrix& m);
// ascending
std::vector<double> symmetric_eigen(const Matrix& m);
// Symmetric tridiagonal eigenproblem by implicit QL; vectors (columns) if requested.
std::vector<double> tridiagonal_eigen(std::vector<double> diag, std::vector<double> off, Matrix* vectors);

std::vector<double> lu_solve(const Matrix& m, const std::vector<double>& b);
Matrix inverse(const Matrix& m);
Matrix expm(const Matrix& m);
Matrix matrix_power(const Matrix& m, int k);
// lower-triangular inverse by substitution
Matrix lower_inverse(const Matrix& l);

} // namespace laxlab
