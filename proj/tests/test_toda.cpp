#include "laxlab/error.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/toda.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace laxlab;

namespace {

// random n-point positive measure with one node per subinterval of [-1.5, 1.5]
HankelMoments random_measure(int n, unsigned seed, int M = 160) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0), uw(0.1, 1.0);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -1.5 + 3.0 * (i + 0.2 + 0.6 * u(rng)) / n;
        w[i] = uw(rng);
    }
    return discrete_moments(x, w, M);
}

TridiagonalLax random_lax(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), up(0.3, 1.0);
    TridiagonalLax l;
    for (int i = 0; i < n; ++i) l.diag.push_back(u(rng));
    for (int i = 0; i + 1 < n; ++i) l.off.push_back(up(rng));
    return l;
}

} // namespace

TEST(LaxFromTau, Examples) {
    const auto g = hankel_moments(WeightSpec::gaussian(1.0), IntervalUnion::parse("-inf:inf"), 20);
    const auto lg = lax_from_tau(g, 5);
    for (double d : lg.diag) EXPECT_NEAR(d, 0.0, 1e-14);
    const auto u = hankel_moments(WeightSpec::uniform(), IntervalUnion::parse("0:1"), 20);
    EXPECT_NEAR(lax_from_tau(u, 2).diag[0], 0.5, 1e-15);
}

TEST(LaxFromTau, GaussianMatchesGramSchmidtJacobiMatrix) {
    const auto g = hankel_moments(WeightSpec::gaussian(1.0), IntervalUnion::parse("-inf:inf"), 20);
    const auto l = lax_from_tau(g, 4);
    // Gram-Schmidt on monomials under a quadrature inner product
    const auto r = weighted_rule(WeightSpec::gaussian(1.0), IntervalUnion::parse("-inf:inf"), 80);
    const int N = static_cast<int>(r.nodes.size());
    std::vector<std::vector<double>> p;
    for (int k = 0; k < 5; ++k) {
        std::vector<double> v(N);
        for (int i = 0; i < N; ++i) v[i] = std::pow(r.nodes[i], k);
        for (const auto& q : p) {
            double c = 0;
            for (int i = 0; i < N; ++i) c += r.weights[i] * v[i] * q[i];
            for (int i = 0; i < N; ++i) v[i] -= c * q[i];
        }
        double nn = 0;
        for (int i = 0; i < N; ++i) nn += r.weights[i] * v[i] * v[i];
        for (double& x : v) x /= std::sqrt(nn);
        p.push_back(v);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double j = 0;
            for (int i = 0; i < N; ++i) j += r.weights[i] * r.nodes[i] * p[a][i] * p[b][i];
            EXPECT_NEAR(l.matrix()(a, b), j, 1e-10);
        }
}

TEST(TodaOde, DiagonalIsStationary) {
    TridiagonalLax l{{1.0, -2.0, 0.5}, {0.0, 0.0}};
    const auto r = toda_ode_flow(l, 1, 1.0, 1e-2);
    EXPECT_LT(max_abs_diff(r.matrix(), l.matrix()), 1e-15);
    const auto q = toda_factorization_flow(l, 2, 0.7);
    EXPECT_LT(max_abs_diff(q.matrix(), l.matrix()), 1e-13);
}

TEST(TodaOde, TwoByTwoSpectrum) {
    TridiagonalLax l{{0.3, -0.4}, {0.8}};
    const auto ev0 = symmetric_eigen(l.matrix());
    const auto r = toda_ode_flow(l, 1, 2.0, 1e-3);
    const auto ev = symmetric_eigen(r.matrix());
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(ev[i], ev0[i], 1e-10);
}

TEST(TodaOde, Isospectral) {
    for (int n = 3; n <= 8; ++n) {
        const auto l = random_lax(n, 100 + n);
        const auto ev0 = symmetric_eigen(l.matrix());
        const auto r = toda_ode_flow(l, 1, 1.0, 1e-3);
        const auto ev = symmetric_eigen(r.matrix());
        for (int i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ev0[i], 1e-8);
    }
}

TEST(TodaOde, FlowsCommute) {
    const auto l = random_lax(5, 7);
    const double s = 0.2;
    for (double h : {2e-2, 1e-2}) {
        const auto a = toda_ode_flow(toda_ode_flow(l, 1, s, h), 2, s, h);
        const auto b = toda_ode_flow(toda_ode_flow(l, 2, s, h), 1, s, h);
        EXPECT_LT(max_abs_diff(a.matrix(), b.matrix()), std::pow(h, 4) * 10 + 1e-8);
    }
}

TEST(TodaQr, ZeroTime) {
    const auto l = random_lax(4, 3);
    EXPECT_LT(max_abs_diff(toda_factorization_flow(l, 1, 0.0).matrix(), l.matrix()), 1e-15);
}

TEST(TodaQr, ConstantMatchesOdeAtSmallTime) {
    // the frozen constant must reproduce the ODE; its negative or double must not
    const auto l = random_lax(5, 21);
    for (int k = 1; k <= 2; ++k) {
        const double t = 1e-2;
        const auto ode = toda_ode_flow(l, k, t, 1e-4);
        EXPECT_LT(max_abs_diff(ode.matrix(), toda_factorization_flow(l, k, t).matrix()), 1e-12);
        const Matrix e = expm((-toda_qr_constant * t) * matrix_power(l.matrix(), k));
        const Matrix q = qr_decompose(e).first;
        EXPECT_GT(max_abs_diff(ode.matrix(), q.transpose() * l.matrix() * q), 1e-4);
    }
    EXPECT_EQ(toda_qr_constant, 0.5);
}

TEST(TodaRoutes, ThreeRoutesAgree) {
    for (int k = 1; k <= 2; ++k) {
        const auto m0 = random_measure(6, 42 + k);
        const auto r = toda_route_comparison(m0, 6, k, 1.0, 1e-3, 10);
        EXPECT_LT(r.tau_vs_ode, 1e-6);
        EXPECT_LT(r.tau_vs_qr, 1e-6);
        EXPECT_LT(r.ode_vs_qr, 1e-6);
        EXPECT_LT(r.eigen_drift, 1e-8);
    }
}

TEST(Orthopoly, ExamplesAndOrthonormality) {
    const auto g = hankel_moments(WeightSpec::gaussian(1.0), IntervalUnion::parse("-inf:inf"), 20);
    EXPECT_NEAR(orthopoly_eval(g, 0, 0.3), 1 / std::sqrt(g.mu[0]), 1e-15);
    EXPECT_NEAR(orthopoly_eval(g, 1, 0.7), 0.7 * std::sqrt(g.mu[0] / (g.mu[0] * g.mu[2])), 1e-14);
    const auto r = weighted_rule(WeightSpec::gaussian(1.0), IntervalUnion::parse("-inf:inf"), 80);
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j) {
            const double ip = r.integrate([&](double z) { return orthopoly_eval(g, i, z) * orthopoly_eval(g, j, z); }) ;
            // weights already include rho; integrate multiplies by weights
            EXPECT_NEAR(ip, i == j ? 1.0 : 0.0, 1e-10) << i << j;
        }
}

TEST(Orthopoly, ThreeTermRecurrence) {
    const auto u = hankel_moments(WeightSpec::uniform(), IntervalUnion::parse("-1:2"), 30);
    const auto l = lax_from_tau(u, 6).matrix();
    for (double z : {-0.9, 0.1, 1.7}) {
        std::vector<double> p(6);
        for (int j = 0; j < 6; ++j) p[j] = orthopoly_eval(u, j, z);
        const auto lp = l * p;
        for (int j = 0; j <= 4; ++j) EXPECT_NEAR(lp[j], z * p[j], 1e-9);
    }
}
