#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/pfaff.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace laxlab;

namespace {

const IntervalUnion kLine = IntervalUnion::parse("-inf:inf");

SkewMoments gauss1(int size) { return skew_inner_products(WeightSpec::gaussian(1.0), kLine, -1, size); }

// m = Q0^{-1} J Q0^{-T} for a random Q0 close to the identity
SkewMoments random_skew_data(int size, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    Matrix q(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < i; ++j)
            if (i / 2 != j / 2) q(i, j) = u(rng);
    for (int b = 0; b < size / 2; ++b) q(2 * b, 2 * b) = q(2 * b + 1, 2 * b + 1) = 1.0 + u(rng);
    const Matrix qi = lower_inverse(q);
    return skew_from_matrix(qi * symplectic_j(size) * qi.transpose());
}

std::vector<double> power_traces(const Matrix& l, int kmax) {
    std::vector<double> out;
    Matrix p = l;
    for (int k = 1; k <= kmax; ++k) {
        double tr = 0;
        for (int i = 0; i < l.rows(); ++i) tr += p(i, i);
        out.push_back(tr);
        p = p * l;
    }
    return out;
}

double poly(const std::vector<double>& c, double z) {
    double r = 0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) r = r * z + c[k];
    return r;
}

double poly_prime(const std::vector<double>& c, double z) {
    double r = 0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) r = r * z + k * c[k];
    return r;
}

} // namespace

TEST(SkewMoments, Antisymmetric) {
    for (int alpha : {-1, 1}) {
        const auto m = skew_inner_products(WeightSpec::gaussian(1.0), kLine, alpha, 10);
        EXPECT_EQ(m.size(), 10);
        for (int i = 0; i < 10; ++i) {
            EXPECT_EQ(m.m(i, i), 0.0);
            for (int j = 0; j < 10; ++j) EXPECT_EQ(m.m(i, j), -m.m(j, i));
        }
    }
}

TEST(SkewMoments, GaussianBetaOneMatchesMonteCarlo) {
    // rho = e^{-y^2}: y, z iid N(0, 1/2), total mass pi
    const auto m = gauss1(4);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    const int N = 400000;
    double s = 0, s2 = 0;
    for (int k = 0; k < N; ++k) {
        const double y = nd(rng), z = nd(rng);
        const double v = M_PI * z * (z > y ? 1.0 : -1.0);
        s += v;
        s2 += v * v;
    }
    const double mean = s / N, sigma = std::sqrt((s2 / N - mean * mean) / N);
    EXPECT_LT(std::abs(m.m(0, 1) - mean), 3 * sigma);
    EXPECT_NEAR(m.m(0, 1), std::sqrt(M_PI / 2), 1e-12);
}

TEST(SkewMoments, BetaFourIsWronskianOfMonomials) {
    const auto w = WeightSpec::laguerre(1.0, 1.0);
    const auto e = IntervalUnion::parse("0:inf");
    const auto m = skew_inner_products(w, e, 1, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            auto f = [i](double y) { return std::pow(y, i); };
            auto fp = [i](double y) { return i ? i * std::pow(y, i - 1) : 0.0; };
            auto g = [j](double y) { return std::pow(y, j); };
            auto gp = [j](double y) { return j ? j * std::pow(y, j - 1) : 0.0; };
            const double ref = skew_inner(w, e, 1, f, fp, g, gp, 256);
            EXPECT_NEAR(m.m(i, j), ref, 1e-12 * (1 + std::abs(ref))) << i << " " << j;
        }
}

TEST(SkewMoments, BadDomains) {
    EXPECT_THROW(skew_inner_products(WeightSpec::uniform(), kLine, -1, 4), Error);
    EXPECT_THROW(skew_inner_products(WeightSpec::laguerre(1, 1), IntervalUnion::parse("-3:-1"), 1, 4), Error);
}

TEST(EvolveSkew, IdentityAndSkewness) {
    const auto m = gauss1(10);
    const auto same = evolve_skew(m, {0.0, 0.0});
    EXPECT_EQ(max_abs_diff(same.m, m.m), 0.0);
    const auto mt = evolve_skew(m, {0.2, -0.1});
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) EXPECT_EQ(mt.m(i, j) + mt.m(j, i), 0.0);
}

TEST(EvolveSkew, MatchesDeformedWeightQuadrature) {
    const auto w = WeightSpec::uniform();
    const auto e = IntervalUnion::parse("-1:1");
    const double t1 = 0.3, t2 = -0.2;
    for (int alpha : {-1, 1}) {
        const auto m0 = skew_inner_products(w, e, alpha, 40);
        const auto mt = evolve_skew(m0, {t1, t2}, 6);
        // beta = 1 deforms each variable; beta = 4 deforms the Wronskian once per factor
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                auto ex = [=](double y) { return std::exp(t1 * y + t2 * y * y); };
                auto f = [=](double y) { return std::pow(y, i) * ex(y); };
                auto fp = [=](double y) {
                    return ((i ? i * std::pow(y, i - 1) : 0.0) + std::pow(y, i) * (t1 + 2 * t2 * y)) * ex(y);
                };
                auto g = [=](double y) { return std::pow(y, j) * ex(y); };
                auto gp = [=](double y) {
                    return ((j ? j * std::pow(y, j - 1) : 0.0) + std::pow(y, j) * (t1 + 2 * t2 * y)) * ex(y);
                };
                EXPECT_NEAR(mt.m(i, j), skew_inner(w, e, alpha, f, fp, g, gp, 128), 1e-9) << alpha << " " << i << j;
            }
    }
}

TEST(EvolveSkew, ShallowDataRaisesDepth) {
    const auto m = gauss1(12);
    EXPECT_THROW(evolve_skew(m, {0.5}, 10), Error);
}

TEST(PfaffTau, SmallExamples) {
    const auto m = gauss1(8);
    const auto tau = pfaff_tau_table(m, 4);
    EXPECT_EQ(tau[0], 1.0);
    EXPECT_DOUBLE_EQ(tau[1], m.m(0, 1));
    for (int j = 1; j <= 4; ++j) {
        const double d = lu_determinant(m.m.block(0, 0, 2 * j, 2 * j));
        EXPECT_NEAR(tau[j] * tau[j], d, 1e-10 * std::abs(d));
    }
}

TEST(PfaffTau, BetaOneTau4MatchesVandermondeMonteCarlo) {
    // tau_4 = (1/4!) int |Delta_4| prod e^{-y^2}
    const auto tau = pfaff_tau_table(gauss1(4), 2);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    const int N = 400000;
    const double mass = M_PI * M_PI / 24.0;
    double s = 0, s2 = 0;
    for (int k = 0; k < N; ++k) {
        double y[4];
        for (double& v : y) v = nd(rng);
        double d = 1;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) d *= std::abs(y[a] - y[b]);
        s += mass * d;
        s2 += mass * mass * d * d;
    }
    const double mean = s / N, sigma = std::sqrt((s2 / N - mean * mean) / N);
    EXPECT_LT(std::abs(tau[2] - mean), 3 * sigma) << tau[2] << " vs " << mean;
}

TEST(PfaffTau, BetaFourTau4IsQuarticVandermonde) {
    // int int (y - z)^4 rho rho = 2 tau_4 for the beta = 4 construction
    const auto w = WeightSpec::gaussian(1.0);
    const auto tau = pfaff_tau_table(skew_inner_products(w, kLine, 1, 4), 2);
    const auto r = weighted_rule(w, kLine, 60);
    double s = 0;
    for (std::size_t a = 0; a < r.nodes.size(); ++a)
        for (std::size_t b = 0; b < r.nodes.size(); ++b)
            s += r.weights[a] * r.weights[b] * std::pow(r.nodes[a] - r.nodes[b], 4);
    EXPECT_NEAR(2 * tau[2], s, 1e-12 * s);
}

TEST(PfaffLax, IdentityDataGivesShift) {
    const auto l = pfaff_lax(skew_from_matrix(symplectic_j(8)));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) EXPECT_NEAR(l(i, j), j == i + 1 ? 1.0 : 0.0, 1e-15);
}

TEST(PfaffLax, LowerHessenberg) {
    for (const auto& m : {gauss1(12), random_skew_data(12, 2)}) {
        const Matrix l = pfaff_lax(m);
        for (int i = 0; i < 12; ++i)
            for (int j = i + 2; j < 12; ++j) EXPECT_NEAR(l(i, j), 0.0, 1e-12);
        // superdiagonal is h_{i+1}/h_i inside each 2x2 block: exactly 1 there
        for (int b = 0; b < 6; ++b) EXPECT_NEAR(l(2 * b, 2 * b + 1), 1.0, 1e-12);
    }
}

TEST(PfaffLax, FiniteLatticeStaysNilpotentAlongFlow) {
    const auto m = random_skew_data(10, 4);
    for (double t : {0.0, 0.2, 0.5}) {
        const Matrix l = pfaff_lax(evolve_skew(m, {t, 0.3 * t}));
        const double scale = l.max_abs();
        const auto tr = power_traces(l, 10);
        for (int k = 0; k < 10; ++k) EXPECT_LT(std::abs(tr[k]), 1e-8 * std::pow(10 * scale, k + 1)) << t << " " << k;
    }
}

TEST(PfaffProjection, SplittingAlgebra) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        Matrix a(8, 8);
        for (double& v : a.data()) v = u(rng);
        const Matrix p = pfaff_p_plus(a), q = pfaff_p_minus(a);
        EXPECT_LT(max_abs_diff(p + q, a), 1e-13);
        EXPECT_LT(max_abs_diff(pfaff_p_plus(p), p), 1e-13);
        EXPECT_LT(pfaff_p_plus(q).max_abs(), 1e-13);
        // P- lands in sp: J X^T J = X
        const Matrix j = symplectic_j(8);
        EXPECT_LT(max_abs_diff(j * q.transpose() * j, q), 1e-13);
        // P+ lands in block-lower with diagonal blocks proportional to Id
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                if (c / 2 > r / 2) EXPECT_EQ(p(r, c), 0.0);
            }
        for (int b = 0; b < 4; ++b) {
            EXPECT_NEAR(p(2 * b, 2 * b + 1), 0.0, 1e-15);
            EXPECT_NEAR(p(2 * b + 1, 2 * b), 0.0, 1e-15);
            EXPECT_NEAR(p(2 * b, 2 * b), p(2 * b + 1, 2 * b + 1), 1e-14);
        }
    }
}

TEST(PfaffOde, ZeroTimeAndIsospectral) {
    const auto m = random_skew_data(8, 6);
    const Matrix q0 = skew_borel(m.m);
    const Matrix l0 = pfaff_lax_from_q(q0);
    const auto s0 = pfaff_ode_flow(l0, q0, 1, 0.0, 1e-3);
    EXPECT_EQ(max_abs_diff(s0.L, l0), 0.0);
    // generic L0: spectrum of the finite matrix is conserved
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Matrix l(8, 8);
    for (double& v : l.data()) v = u(rng);
    const auto before = power_traces(l, 8);
    const auto s = pfaff_ode_flow(l, Matrix::identity(8), 2, 0.5, 1e-3);
    const auto after = power_traces(s.L, 8);
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(after[k], before[k], 1e-10);
}

TEST(PfaffOde, TwoRoutesAgree) {
    for (int k : {1, 2})
        for (double t : {0.1, 0.5}) {
            EXPECT_LT(pfaff_route_difference(random_skew_data(12, 1), k, t, 1e-3, 12), 1e-6);
            EXPECT_LT(pfaff_route_difference(gauss1(12), k, t, 1e-3, 12), 1e-6);
        }
}

TEST(SkewOrthopoly, SkewOrthonormalUnderQuadrature) {
    for (int alpha : {-1, 1}) {
        const auto w = alpha < 0 ? WeightSpec::gaussian(1.0) : WeightSpec::laguerre(1.0, 1.0);
        const auto e = alpha < 0 ? kLine : IntervalUnion::parse("0:inf");
        const auto m = skew_inner_products(w, e, alpha, 6);
        const Matrix q = skew_borel(m.m);
        std::vector<std::vector<double>> c(6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j <= i; ++j) c[i].push_back(q(i, j));
        for (int i = 0; i < 6; ++i) EXPECT_NEAR(skew_orthopoly_eval(m, i, 0.7), poly(c[i], 0.7), 1e-12);
        const Matrix jm = symplectic_j(6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double v = skew_inner(
                    w, e, alpha, [&](double y) { return poly(c[i], y); }, [&](double y) { return poly_prime(c[i], y); },
                    [&](double y) { return poly(c[j], y); }, [&](double y) { return poly_prime(c[j], y); }, 128);
                EXPECT_NEAR(v, jm(i, j), 1e-8) << alpha << " " << i << j;
            }
    }
}

TEST(SkewOrthopoly, TauFormulaAgrees) {
    for (const auto& m : {gauss1(14), skew_inner_products(WeightSpec::laguerre(1, 1), IntervalUnion::parse("0:inf"), 1, 14)})
        for (int n = 0; n < 6; ++n)
            for (double z : {0.3, -1.2, 2.5}) {
                const double a = skew_orthopoly_eval(m, n, z);
                EXPECT_NEAR(skew_orthopoly_tau(m, n, z), a, 1e-9 * (1 + std::abs(a))) << n << " " << z;
            }
}

TEST(SkewOrthopoly, EvenIndexIsEvenForEvenWeight) {
    const auto m = gauss1(8);
    for (int n : {0, 2, 4, 6})
        for (double z : {0.4, 1.3}) {
            const double a = skew_orthopoly_eval(m, n, z);
            EXPECT_NEAR(skew_orthopoly_eval(m, n, -z), a, 1e-10 * (1 + std::abs(a)));
        }
}

TEST(PfaffKp, ResidualSmall) {
    const auto g = gauss1(18);
    const auto l = skew_inner_products(WeightSpec::laguerre(1, 1), IntervalUnion::parse("0:inf"), 1, 18);
    for (int n : {2, 4}) {
        EXPECT_LT(std::abs(pfaffkp_residual(g, n).residual), 1e-6);
        EXPECT_LT(std::abs(pfaffkp_residual(l, n).residual), 1e-6);
    }
}

TEST(PfaffKp, SmallTime) {
    // bounded E so that the exponential series converges on the moment data
    const auto m0 = skew_inner_products(WeightSpec::gaussian(1.0), IntervalUnion::parse("-2:2"), -1, 60);
    const auto g = evolve_skew(m0, {0.05, -0.03, 0.02}, 18);
    for (int n : {2, 4}) EXPECT_LT(std::abs(pfaffkp_residual(g, n).residual), 1e-6);
}

TEST(PfaffKp, DegenerateTauFlagged) {
    Matrix m = symplectic_j(18);
    // pf of the leading 4-block = m01 m23 - m02 m13 + m03 m12 = 0
    m(0, 2) = 1;
    m(2, 0) = -1;
    m(1, 3) = 1;
    m(3, 1) = -1;
    EXPECT_THROW(pfaffkp_residual(skew_from_matrix(m), 4), Error);
}
