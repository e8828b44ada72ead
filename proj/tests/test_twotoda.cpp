#include "laxlab/error.hpp"
#include "laxlab/twotoda.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace laxlab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
const IntervalUnion R({{-inf, inf}});

double rho(double c, double x, double y) { return std::exp(-(x * x + y * y) / 2 + c * x * y); }

// iint over a box with a dense Gauss-Legendre product rule
template <class F>
double box_integral(double x0, double x1, double y0, double y1, int order, F f) {
    const auto rx = gauss_legendre_rule(order, x0, x1), ry = gauss_legendre_rule(order, y0, y1);
    double s = 0;
    for (std::size_t p = 0; p < rx.nodes.size(); ++p)
        for (std::size_t q = 0; q < ry.nodes.size(); ++q) s += rx.weights[p] * ry.weights[q] * f(rx.nodes[p], ry.nodes[q]);
    return s;
}

// n = 1 gap probability from the inner integral in closed form (erfc)
double bivariate_gap(double a, double b, double c) {
    const auto r = gauss_legendre_rule(200, -14.0, a);
    const double s = r.integrate([&](double x) {
        return std::exp(-x * x / 2 + c * c * x * x / 2) * std::sqrt(M_PI / 2) * std::erfc(-(b - c * x) / std::sqrt(2.0));
    });
    return s / (2 * M_PI / std::sqrt(1 - c * c));
}

} // namespace

TEST(BiMoments, GaussianNormalization) {
    for (double c : {0.0, 0.5, -0.7})
        EXPECT_NEAR(bimoments(c, R, R, 3).m(0, 0), 2 * M_PI / std::sqrt(1 - c * c), 1e-12) << c;
    EXPECT_LT(bimoment_quadrature_error(0.5, R, R, 8), 1e-12);
}

TEST(BiMoments, UncoupledFactorizes) {
    const auto m = bimoments(0.0, R, R, 4);
    const double g[4] = {std::sqrt(2 * M_PI), 0.0, std::sqrt(2 * M_PI), 0.0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(m.m(i, j), g[i] * g[j], 1e-12);
}

TEST(BiMoments, CrossMomentMatchesMonteCarlo) {
    // rho / mu_00 is the normal law with covariance [[1, c], [c, 1]] / (1 - c^2)
    const double c = 0.5;
    const auto m = bimoments(c, R, R, 2);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    const double sd = 1 / std::sqrt(1 - c * c);
    const int count = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < count; ++i) {
        const double u = z(rng), v = z(rng);
        const double x = sd * u, y = sd * (c * u + std::sqrt(1 - c * c) * v);
        s += x * y;
        s2 += x * y * x * y;
    }
    const double mean = s / count, se = std::sqrt((s2 / count - mean * mean) / count);
    EXPECT_NEAR(m.m(1, 1) / m.m(0, 0), mean, 3 * se);
}

TEST(BiMoments, Errors) {
    EXPECT_THROW(bimoments(1.0, R, R, 2), Error);
    EXPECT_THROW(bimoments(0.2, IntervalUnion(), R, 2), Error);
    EXPECT_NO_THROW(bimoments(1.5, IntervalUnion({{0, 1}}), IntervalUnion({{0, 1}}), 2));
}

TEST(BiEvolution, IdentityAndLeftShift) {
    const auto m = bimoments(0.4, IntervalUnion({{-1, 1}}), IntervalUnion({{-0.5, 1.5}}), 8);
    const auto same = evolve_bimoments(m, {}, {});
    for (std::size_t i = 0; i < m.m.data().size(); ++i) EXPECT_EQ(same.m.data()[i], m.m.data()[i]);
    // t_1 only: row i becomes sum_k t^k/k! mu_{i+k, j}
    const double t = 0.3;
    const auto e = evolve_bimoments(m, {t}, {});
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double s = 0, f = 1;
            for (int k = 0; i + k < 8; ++k) {
                s += std::pow(t, k) / f * m.m(i + k, j);
                f *= k + 1;
            }
            EXPECT_NEAR(e.m(i, j), s, 1e-14 * std::abs(s) + 1e-15);
        }
}

TEST(BiEvolution, MatchesDeformedQuadrature) {
    const double c = 0.4;
    const std::vector<double> t{0.3, -0.2}, s{0.1, 0.25};
    const auto m = bimoments(c, IntervalUnion({{-1, 1}}), IntervalUnion({{-0.5, 1.5}}), 34);
    const auto e = evolve_bimoments(m, t, s, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double oracle = box_integral(-1, 1, -0.5, 1.5, 80, [&](double x, double y) {
                return std::pow(x, i) * std::pow(y, j) * rho(c, x, y) *
                       std::exp(t[0] * x + t[1] * x * x - s[0] * y - s[1] * y * y);
            });
            EXPECT_NEAR(e.m(i, j), oracle, 1e-9 * std::abs(oracle) + 1e-12) << i << j;
        }
}

TEST(BiEvolution, GroupLaw) {
    const auto m = bimoments(0.5, IntervalUnion({{-1, 1}}), IntervalUnion({{-1, 1}}), 10);
    const std::vector<double> t1{0.2, 0.1}, s1{-0.1}, t2{-0.05, 0.3, 0.1}, s2{0.2, -0.1};
    const auto a = evolve_bimoments(evolve_bimoments(m, t1, s1), t2, s2);
    const auto b = evolve_bimoments(m, {0.15, 0.4, 0.1}, {0.1, -0.1});
    double big = 0;
    for (double v : b.m.data()) big = std::max(big, std::abs(v));
    for (std::size_t i = 0; i < a.m.data().size(); ++i) EXPECT_NEAR(a.m.data()[i], b.m.data()[i], 1e-12 * big);
}

TEST(BiEvolution, TruncationDetected) {
    const auto m = bimoments(0.5, R, R, 6);
    EXPECT_THROW(evolve_bimoments(m, {0.5}, {}, 4), Error);
}

TEST(BiTau, TableAndFactorization) {
    const auto m = bimoments(0.5, R, R, 6);
    const auto tau = tau2_table(m, 4);
    EXPECT_EQ(tau[0], 1.0);
    EXPECT_DOUBLE_EQ(tau[1], m.m(0, 0));
    // Gram-Schmidt by hand: h0 = mu00, h1 = mu11 - mu10 mu01 / mu00
    const double h0 = m.m(0, 0), h1 = m.m(1, 1) - m.m(1, 0) * m.m(0, 1) / m.m(0, 0);
    EXPECT_NEAR(tau[2], h0 * h1, 1e-10 * std::abs(tau[2]));
    const auto b = biorthogonalize(m, 3);
    for (int n = 0; n < 3; ++n) EXPECT_NEAR(b.h[n], tau[n + 1] / tau[n], 1e-9 * std::abs(b.h[n]));
}

TEST(BiTau, UncoupledIsDegenerate) {
    const auto m = bimoments(0.0, R, R, 4);
    const auto tau = tau2_table(m, 2);
    EXPECT_LT(std::abs(tau[2]), 1e-12 * m.m(0, 0) * m.m(2, 2));
    EXPECT_THROW(biorthopoly_eval(m, 1, 2, 0.3), Error);
    EXPECT_THROW(cd_kernel(m, 2, 0.1, 0.2), Error);
    try {
        biorthogonalize(m, 2);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singular_tau);
    }
}

TEST(BiOrthogonality, QuadratureCheck) {
    const double c = 0.5;
    const auto m = bimoments(c, R, R, 6);
    EXPECT_EQ(biorthopoly_eval(m, 1, 0, 0.7), 1.0);
    EXPECT_EQ(biorthopoly_eval(m, 2, 0, 0.7), 1.0);
    const auto b = biorthogonalize(m, 4);
    const auto tau = tau2_table(m, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double v = box_integral(-16, 16, -16, 16, 240, [&](double x, double y) {
                return biorthopoly_eval(m, 1, i, x) * biorthopoly_eval(m, 2, j, y) * rho(c, x, y);
            });
            EXPECT_NEAR(v, i == j ? tau[i + 1] / tau[i] : 0.0, 1e-9 * b.h[std::max(i, j)]) << i << j;
        }
}

TEST(BiOrthogonality, MonicLeadingCoefficients) {
    const auto m = bimoments(0.3, IntervalUnion({{-1, 2}}), IntervalUnion({{-2, 1}}), 6);
    const auto b = biorthogonalize(m, 4);
    for (int n = 0; n <= 4; ++n) {
        EXPECT_EQ(b.p1(n, n), 1.0);
        EXPECT_EQ(b.p2(n, n), 1.0);
    }
}

TEST(CdKernel, ReproducesAndTraces) {
    const double c = 0.5;
    const auto m = bimoments(c, R, R, 6);
    EXPECT_NEAR(cd_kernel(m, 1, 0.3, -0.8), 1 / m.m(0, 0), 1e-15);
    const int n = 3;
    auto q = [](double x) { return 1 + 2 * x - x * x; };
    for (double y : {-0.7, 0.4, 1.3}) {
        const double v = box_integral(-16, 16, -16, 16, 200,
                                      [&](double x, double z) { return q(x) * rho(c, x, z) * cd_kernel(m, n, y, z); });
        EXPECT_NEAR(v, q(y), 1e-8) << y;
    }
    const double tr =
        box_integral(-16, 16, -16, 16, 200, [&](double x, double z) { return cd_kernel(m, n, x, z) * rho(c, x, z); });
    EXPECT_NEAR(tr, n, 1e-8);
}

TEST(Wronskian, IdentitiesOnThePlane) {
    const auto m = bimoments(0.5, R, R, 12);
    for (int n : {2, 3}) {
        const auto r = wronskian_identity_residual(m, n);
        EXPECT_LT(r.s_identity, 1e-8) << n;
        EXPECT_LT(r.t_identity, 1e-8) << n;
        EXPECT_LT(r.wronskian, 1e-8) << n;
        EXPECT_FALSE(r.small_denominator);
    }
}

TEST(Wronskian, IdentitiesOnARestrictedSet) {
    const auto m = bimoments(0.5, IntervalUnion({{-inf, 0.3}}), IntervalUnion({{-1, inf}}), 12);
    for (int n : {1, 2, 3}) {
        const auto r = wronskian_identity_residual(m, n);
        EXPECT_LT(r.s_identity, 1e-8) << n;
        EXPECT_LT(r.t_identity, 1e-8) << n;
        EXPECT_LT(r.wronskian, 1e-8) << n;
    }
}

TEST(Wronskian, InvariantUnderRescaling) {
    const auto m = bimoments(0.5, IntervalUnion({{-inf, 0.3}}), R, 12);
    const auto m2 = bimoments_from_matrix(2.0 * m.m);
    const auto a = wronskian_identity_residual(m, 2), b = wronskian_identity_residual(m2, 2);
    EXPECT_NEAR(a.denominator, b.denominator, 1e-12 * a.denominator);
    EXPECT_NEAR(a.s_identity, b.s_identity, 1e-12);
    EXPECT_NEAR(a.t_identity, b.t_identity, 1e-12);
}

TEST(BiKp, KpInBothTimes) {
    for (const auto& m : {bimoments(0.5, R, R, 16), bimoments(-0.3, IntervalUnion({{-1, 2}}), IntervalUnion({{-inf, 0.5}}), 16)})
        for (int n : {2, 3}) {
            EXPECT_LT(bimoment_kp_residual(m, n, 1), 1e-6) << n;
            EXPECT_LT(bimoment_kp_residual(m, n, 2), 1e-6) << n;
        }
}

TEST(CoupledGap, OneByOneIsBivariateNormal) {
    for (auto [a, b, c] : std::vector<std::array<double, 3>>{{0.3, 0.3, 0.5}, {-0.5, 1.0, -0.6}, {1.2, 0.1, 0.2}})
        EXPECT_NEAR(coupled_gap_probability(1, a, b, c), bivariate_gap(a, b, c), 1e-10);
}

TEST(CoupledOperators, LieAlgebraTable) {
    const auto A1 = CoupledOperators::A1(), B1 = CoupledOperators::B1(), A2 = CoupledOperators::A2(),
               B2 = CoupledOperators::B2();
    const Function3 f = [](const std::array<double, 3>& p) {
        return std::sin(0.7 * p[0] + 1.3 * p[1]) * std::exp(0.4 * p[2]) + p[0] * p[0] * p[1] * p[2] * p[2] * p[2];
    };
    const Function3 g = [](const std::array<double, 3>& p) { return std::cos(p[0] - 0.5 * p[1] * p[2]) / (2 + p[1] * p[1]); };
    auto once = [](const Field3& X, const Function3& h, const std::array<double, 3>& p) {
        return fd_apply(X, FdFunction{h, 0.0}).f(p);
    };
    for (const auto& h : {f, g})
        for (const auto& p : std::vector<std::array<double, 3>>{{0.3, -0.2, 0.5}, {-0.8, 0.6, -0.3}}) {
            const double c = p[2], k = 1 - c * c;
            EXPECT_NEAR(fd_bracket(A1, B1, h, p), 0.0, 1e-6);
            EXPECT_NEAR(fd_bracket(A2, B2, h, p), 0.0, 1e-6);
            EXPECT_NEAR(fd_bracket(A1, A2, h, p), (1 + c * c) / k * once(A1, h, p), 1e-6);
            EXPECT_NEAR(fd_bracket(A2, B1, h, p), 2 * c / k * once(A1, h, p), 1e-6);
            EXPECT_NEAR(fd_bracket(A1, B2, h, p), -2 * c / k * once(B1, h, p), 1e-6);
            EXPECT_NEAR(fd_bracket(B1, B2, h, p), (1 + c * c) / k * once(B1, h, p), 1e-6);
        }
}

TEST(CoupledPde, ResidualAtTheReferencePoint) {
    EXPECT_LT(coupled_pde_residual(0.5, 0.3, 0.3, 1).residual, 1e-3);
    EXPECT_LT(coupled_pde_residual(0.5, 0.3, 0.3, 2).residual, 1e-3);
}

TEST(CoupledPde, RandomPoints) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ab(-1.0, 1.0), cc(-0.7, 0.7);
    for (int i = 0; i < 5; ++i) {
        const double a = ab(rng), b = ab(rng);
        double c = cc(rng);
        if (std::abs(c) < 0.05) c = 0.05;
        EXPECT_LT(coupled_pde_residual(c, a, b, 1).residual, 1e-3) << a << " " << b << " " << c;
    }
}

TEST(CoupledPde, SwapSymmetry) {
    const auto r = coupled_pde_residual(0.4, -0.2, 0.6, 1), s = coupled_pde_residual(0.4, 0.6, -0.2, 1);
    EXPECT_NEAR(r.lhs, s.rhs, 1e-6 * std::abs(r.lhs));
    EXPECT_NEAR(r.rhs, s.lhs, 1e-6 * std::abs(r.rhs));
    // the residuals themselves are finite difference error, only opposite up to that
    EXPECT_NEAR(r.signed_residual, -s.signed_residual, 1e-6);
}

TEST(CoupledPde, Errors) {
    EXPECT_THROW(coupled_pde_residual(0.0, 0.3, 0.3, 1), Error);
    EXPECT_THROW(coupled_pde_residual(1.0, 0.3, 0.3, 1), Error);
    EXPECT_THROW(coupled_pde_residual(0.5, 0.3, 0.3, 3), Error);
}
