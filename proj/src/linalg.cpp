#include "laxlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace laxlab {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (!m.square()) throw Error(ErrorKind::dimension, std::string(what) + ": matrix not square");
}

} // namespace

double lu_determinant(const Matrix& m) {
    require_square(m, "lu_determinant");
    return determinant_of(m.data(), m.rows());
}

bool is_symmetric(const Matrix& m, double rel) {
    if (!m.square()) return false;
    const double tol = rel * m.norm_inf();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    return true;
}

bool is_skew(const Matrix& m, double rel) {
    if (!m.square()) return false;
    const double tol = rel * m.norm_inf();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) + m(j, i)) > tol) return false;
    return true;
}

double pfaffian(const Matrix& m) {
    require_square(m, "pfaffian");
    if (m.rows() % 2) throw Error(ErrorKind::dimension, "pfaffian of odd dimension");
    if (!is_skew(m)) throw Error(ErrorKind::symmetry, "pfaffian of a non-skew matrix");
    return pfaffian_of(m.data(), m.rows());
}

Matrix cholesky_borel(const Matrix& m) {
    require_square(m, "cholesky_borel");
    if (!is_symmetric(m)) throw Error(ErrorKind::symmetry, "cholesky_borel of a non-symmetric matrix");
    const int n = m.rows();
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw Error(ErrorKind::not_positive_definite, "non-positive pivot at " + std::to_string(j));
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return lower_inverse(l);
}

Matrix lower_inverse(const Matrix& l) {
    const int n = l.rows();
    Matrix s(n, n);
    for (int j = 0; j < n; ++j) {
        if (l(j, j) == 0.0) throw Error(ErrorKind::singular, "zero diagonal in triangular inverse");
        s(j, j) = 1.0 / l(j, j);
        for (int i = j + 1; i < n; ++i) {
            double acc = 0.0;
            for (int k = j; k < i; ++k) acc += l(i, k) * s(k, j);
            s(i, j) = -acc / l(i, i);
        }
    }
    return s;
}

Matrix skew_borel(const Matrix& m) {
    require_square(m, "skew_borel");
    if (m.rows() % 2) throw Error(ErrorKind::dimension, "skew_borel of odd dimension");
    if (!is_skew(m)) throw Error(ErrorKind::symmetry, "skew_borel of a non-skew matrix");
    const int n = m.rows();
    Matrix a = m;
    Matrix q = Matrix::identity(n);
    for (int k = 0; k < n; k += 2) {
        const double piv = a(k, k + 1);
        // against the current block rows: moment matrices grow factorially down the diagonal
        double scale = std::numeric_limits<double>::min();
        for (int j = 0; j < n; ++j) scale = std::max({scale, std::abs(a(k, j)), std::abs(a(k + 1, j))});
        if (!(piv > 1e-14 * scale))
            throw Error(ErrorKind::degenerate_flag,
                        "leading Pfaffian ratio " + std::to_string(piv) + " at block " + std::to_string(k / 2));
        for (int i = k + 2; i < n; ++i) {
            const double x0 = -a(i, k + 1) / piv;
            const double x1 = a(i, k) / piv;
            // row_i += x0 row_k + x1 row_{k+1}, then the same on columns
            for (int j = 0; j < n; ++j) a(i, j) += x0 * a(k, j) + x1 * a(k + 1, j);
            for (int j = 0; j < n; ++j) a(j, i) += x0 * a(j, k) + x1 * a(j, k + 1);
            for (int j = 0; j < n; ++j) q(i, j) += x0 * q(k, j) + x1 * q(k + 1, j);
        }
        const double c = 1.0 / std::sqrt(piv);
        for (int j = 0; j < n; ++j) {
            q(k, j) *= c;
            q(k + 1, j) *= c;
        }
        for (int j = 0; j < n; ++j) {
            a(k, j) *= c;
            a(k + 1, j) *= c;
            a(j, k) *= c;
            a(j, k + 1) *= c;
        }
    }
    return q;
}

std::pair<Matrix, Matrix> qr_decompose(const Matrix& m) {
    require_square(m, "qr_decompose");
    const int n = m.rows();
    Matrix r = m;
    Matrix q = Matrix::identity(n);
    const double scale = std::max(m.norm_inf(), std::numeric_limits<double>::min());
    for (int k = 0; k < n - 1; ++k) {
        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += r(i, k) * r(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        std::vector<double> v(n, 0.0);
        const double alpha = r(k, k) > 0 ? -norm : norm;
        for (int i = k; i < n; ++i) v[i] = r(i, k);
        v[k] -= alpha;
        double vv = 0.0;
        for (int i = k; i < n; ++i) vv += v[i] * v[i];
        if (vv == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += v[i] * r(i, j);
            s = 2.0 * s / vv;
            for (int i = k; i < n; ++i) r(i, j) -= s * v[i];
        }
        // q <- q H
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k; j < n; ++j) s += q(i, j) * v[j];
            s = 2.0 * s / vv;
            for (int j = k; j < n; ++j) q(i, j) -= s * v[j];
        }
    }
    for (int k = 0; k < n; ++k) {
        if (std::abs(r(k, k)) <= 1e-14 * scale) throw Error(ErrorKind::singular, "rank-deficient matrix in QR");
        if (r(k, k) < 0) {
            for (int j = 0; j < n; ++j) r(k, j) = -r(k, j);
            for (int i = 0; i < n; ++i) q(i, k) = -q(i, k);
        }
        for (int i = k + 1; i < n; ++i) r(i, k) = 0.0;
    }
    return {q, r};
}

std::vector<double> tridiagonal_eigen(std::vector<double> d, std::vector<double> e, Matrix* z) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    if (n > 0) e[n - 1] = 0.0;
    if (z) *z = Matrix::identity(n);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 200) throw Error(ErrorKind::precision, "tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    // sort ascending, carrying vectors
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = d[idx[i]];
    if (z) {
        Matrix zs(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) zs(k, j) = (*z)(k, idx[j]);
        *z = zs;
    }
    return out;
}

std::vector<double> symmetric_eigen(const Matrix& m) {
    require_square(m, "symmetric_eigen");
    if (!is_symmetric(m)) throw Error(ErrorKind::symmetry, "symmetric_eigen of a non-symmetric matrix");
    const int n = m.rows();
    if (n == 0) return {};
    // Householder reduction to tridiagonal form
    Matrix a = m;
    std::vector<double> d(n), e(n, 0.0);
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= (f * e[k] + g * a(i, k));
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    for (int i = 0; i < n; ++i) d[i] = a(i, i);
    std::vector<double> off(n, 0.0);
    for (int i = 1; i < n; ++i) off[i - 1] = e[i];
    return tridiagonal_eigen(d, off, nullptr);
}

std::vector<double> lu_solve(const Matrix& m, const std::vector<double>& b) {
    require_square(m, "lu_solve");
    const int n = m.rows();
    if (static_cast<int>(b.size()) != n) throw Error(ErrorKind::dimension, "rhs size mismatch");
    Matrix a = m;
    std::vector<double> x = b;
    const double scale = std::max(m.norm_inf(), std::numeric_limits<double>::min());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) <= 1e-300 * scale) throw Error(ErrorKind::singular, "singular matrix in solve");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            std::swap(x[p], x[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            x[i] -= f * x[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Matrix inverse(const Matrix& m) {
    require_square(m, "inverse");
    const int n = m.rows();
    Matrix inv(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = lu_solve(m, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

Matrix matrix_power(const Matrix& m, int k) {
    require_square(m, "matrix_power");
    Matrix r = Matrix::identity(m.rows());
    for (int i = 0; i < k; ++i) r = r * m;
    return r;
}

Matrix expm(const Matrix& m) {
    require_square(m, "expm");
    const int n = m.rows();
    const double norm = m.norm_inf();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    Matrix a = m * std::ldexp(1.0, -s);
    Matrix term = Matrix::identity(n);
    Matrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * a;
        term *= 1.0 / k;
        sum += term;
        if (term.max_abs() <= 1e-18 * sum.max_abs()) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    for (double v : sum.data())
        if (!std::isfinite(v)) throw Error(ErrorKind::precision, "matrix exponential overflow");
    return sum;
}

} // namespace laxlab
