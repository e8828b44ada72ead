#include "laxlab/error.hpp"
#include "laxlab/fredholm.hpp"
#include "laxlab/linalg.hpp"
#include "laxlab/quadrature.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

using namespace laxlab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

IntervalUnion from(double s) { return IntervalUnion({{s, inf}}); }

// log F2(s) = -int_s^inf (x - s) q(x)^2 dx with q'' = xq + 2q^3, q ~ Ai at +inf.
// Integrates (q, q', u = log F2, u') backwards from s = 8 with RK4.
double tracy_widom_by_painleve(double s) {
    using State = std::array<double, 4>;
    auto rhs = [](double x, const State& y) { return State{y[1], x * y[0] + 2 * y[0] * y[0] * y[0], y[3], -y[0] * y[0]}; };
    double x = 8.0;
    State y{boost::math::airy_ai(x), boost::math::airy_ai_prime(x), 0.0, 0.0};
    const int steps = static_cast<int>(std::ceil((x - s) / 1e-3));
    const double h = -(x - s) / steps;
    for (int i = 0; i < steps; ++i) {
        State k1 = rhs(x, y), t;
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k1[j];
        State k2 = rhs(x + 0.5 * h, t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k2[j];
        State k3 = rhs(x + 0.5 * h, t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + h * k3[j];
        State k4 = rhs(x + h, t);
        for (int j = 0; j < 4; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        x += h;
    }
    return std::exp(y[2]);
}

} // namespace

TEST(Kernels, SineDiagonalIsOne) {
    EXPECT_NEAR(kernel_eval(KernelSpec::sine(), 0.3, 0.3), 1.0, 1e-15);
    EXPECT_NEAR(kernel_eval(KernelSpec::sine(), 0.3, 0.3 + 1e-9), 1.0, 1e-12);
}

TEST(Kernels, AiryMatchesIntegralOfAiryProducts) {
    // int_0^inf Ai(u) Ai(u + 1) du with Boost's Ai, cut at u = 14
    const auto rule = gauss_legendre_rule(200, 0.0, 14.0);
    const double oracle =
        rule.integrate([](double u) { return boost::math::airy_ai(u) * boost::math::airy_ai(u + 1.0); });
    EXPECT_NEAR(kernel_eval(KernelSpec::airy(), 0.0, 1.0), oracle, 1e-10);
    const double diag = rule.integrate([](double u) { return std::pow(boost::math::airy_ai(u - 0.5), 2); });
    EXPECT_NEAR(kernel_eval(KernelSpec::airy(), -0.5, -0.5), diag, 1e-10);
}

TEST(Kernels, HermiteTraceIsN) {
    for (int N : {1, 5, 20}) {
        const auto k = KernelSpec::hermite(N, 0.7);
        const auto rule = gauss_legendre_rule(300, -15.0, 15.0);
        EXPECT_NEAR(rule.integrate([&](double z) { return kernel_eval(k, z, z); }), N, 1e-10) << N;
    }
}

TEST(Kernels, HermiteFunctionsOrthonormal) {
    const auto rule = gauss_legendre_rule(300, -12.0, 12.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double g = rule.integrate([&](double z) {
                const auto p = hermite_functions(6, 1.0, z);
                return p[i] * p[j];
            });
            EXPECT_NEAR(g, i == j ? 1.0 : 0.0, 1e-12);
        }
}

TEST(Kernels, Symmetric) {
    const std::vector<KernelSpec> ks{KernelSpec::airy(), KernelSpec::bessel(0.0), KernelSpec::bessel(1.5),
                                     KernelSpec::sine(), KernelSpec::hermite(7, 1.3)};
    for (const auto& k : ks)
        for (double y : {0.2, 1.1, 2.7})
            for (double z : {0.4, 1.1, 3.3})
                EXPECT_NEAR(kernel_eval(k, y, z), kernel_eval(k, z, y), 1e-12) << k.str();
}

TEST(Kernels, BadDomains) {
    EXPECT_THROW(kernel_eval(KernelSpec::bessel(0.0), -1.0, 1.0), Error);
    EXPECT_THROW(KernelSpec::bessel(-1.5).validate(), Error);
    EXPECT_THROW(KernelSpec::hermite(0).validate(), Error);
    EXPECT_THROW(KernelSpec::parse("laplace"), Error);
}

TEST(Kernels, ParseRoundTrip) {
    for (const std::string s : {"airy", "sine", "bessel:0.25", "hermite:12:0.5"}) {
        const auto k = KernelSpec::parse(s);
        EXPECT_EQ(KernelSpec::parse(k.str()).str(), k.str());
    }
    EXPECT_EQ(KernelSpec::parse("hermite:12").N, 12);
}

TEST(Nystrom, TrivialCases) {
    EXPECT_EQ(nystrom_det(KernelSpec::airy(0.0), from(-2.0)), 1.0);
    EXPECT_EQ(nystrom_det(KernelSpec::airy(), IntervalUnion()), 1.0);
    EXPECT_THROW(nystrom_det(KernelSpec::airy(), IntervalUnion::parse("-inf:0")), Error);
    EXPECT_THROW(nystrom_det(KernelSpec::bessel(0.0), IntervalUnion::parse("1:inf")), Error);
}

TEST(Nystrom, SelfConsistentAndMatchesPainleveRoute) {
    for (double s : {-3.0, -2.0, -1.0, 0.0, 1.0}) {
        const auto v = nystrom_det_checked(KernelSpec::airy(), from(s), 64);
        EXPECT_LT(v.error, 1e-10) << s;
        EXPECT_NEAR(v.value, tracy_widom_by_painleve(s), 1e-6) << s;
    }
}

TEST(Nystrom, BesselZeroHardEdgeClosedForm) {
    // nu = 0: det(I - K on (0, s)) = e^{-s/4}
    for (double s : {0.5, 2.0, 5.0}) {
        const auto v = nystrom_det_checked(KernelSpec::bessel(0.0), IntervalUnion({{0.0, s}}), 32);
        EXPECT_NEAR(v.value, std::exp(-s / 4), 1e-12) << s;
    }
}

TEST(Nystrom, TraceExpansionForSmallLambda) {
    const std::vector<std::pair<KernelSpec, IntervalUnion>> cases{
        {KernelSpec::airy(), IntervalUnion::parse("-2:-0.5,0.5:inf")},
        {KernelSpec::sine(), IntervalUnion::parse("-1:0.3,0.8:2")},
        {KernelSpec::bessel(0.5), IntervalUnion::parse("0:1,2:4")},
    };
    for (const auto& [k, E] : cases) {
        // trace powers from a coarser grid than the determinant
        const Matrix m = nystrom_matrix(k, E, 40);
        std::vector<double> tr;
        Matrix p = m;
        for (int j = 1; j <= 6; ++j) {
            double t = 0;
            for (int i = 0; i < m.rows(); ++i) t += p(i, i);
            tr.push_back(t);
            p = p * m;
        }
        for (double lam : {0.02, 0.05}) {
            KernelSpec kl = k;
            kl.lambda = lam;
            double s = 0;
            for (int j = 1; j <= 6; ++j) s += std::pow(lam, j) * tr[j - 1] / j;
            EXPECT_NEAR(nystrom_det(kl, E, 64), std::exp(-s), 1e-8) << k.str() << " " << lam;
        }
    }
}

TEST(Nystrom, AiryMonotone) {
    double prev = 0;
    for (double s = -4; s <= 3; s += 0.5) {
        const double v = nystrom_det(KernelSpec::airy(), from(s));
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    // shrinking a bounded piece raises the determinant too
    EXPECT_GT(nystrom_det(KernelSpec::airy(), IntervalUnion({{0.2, 0.8}})),
              nystrom_det(KernelSpec::airy(), IntervalUnion({{0.0, 1.0}})));
}

TEST(Nystrom, HermiteDeterminantIsFiniteNGap) {
    // det(I - K_1 on E) = 1 - int_E phi_0^2 for N = 1
    const double s = 0.4;
    const double v = nystrom_det(KernelSpec::hermite(1), IntervalUnion({{s, inf}}));
    EXPECT_NEAR(v, 1 - 0.5 * std::erfc(s), 1e-12);
}

TEST(LogDetJet, DerivativesMatchFiniteDifferences) {
    const auto sp = make_jet_space(1, 2);
    const double s = -1.3, h = 1e-4;
    const Jet F = fredholm_log_det_jet(KernelSpec::airy(), from(s), [&](double c) { return Jet::variable(sp, 0, c); });
    auto f = [](double x) { return std::log(nystrom_det(KernelSpec::airy(), from(x))); };
    EXPECT_NEAR(F.value(), f(s), 1e-12);
    EXPECT_NEAR(F.derivative({1}), (f(s + h) - f(s - h)) / (2 * h), 1e-7);
    EXPECT_NEAR(F.derivative({2}), (f(s + h) - 2 * f(s) + f(s - h)) / (h * h), 1e-4);

    const Jet G = fredholm_log_det_jet(KernelSpec::bessel(0.25), IntervalUnion::parse("0.5:1.5,2:3"),
                                       [&](double c) { return Jet::variable(sp, 0, c); });
    auto g = [](double d) {
        return std::log(nystrom_det(KernelSpec::bessel(0.25), IntervalUnion({{0.5 + d, 1.5 + d}, {2 + d, 3 + d}})));
    };
    EXPECT_NEAR(G.derivative({1}), (g(h) - g(-h)) / (2 * h), 1e-7);
}

TEST(ScalingLimits, EdgeConvergesToAiry) {
    std::vector<double> grid;
    for (double x = -2; x <= 2.001; x += 0.25) grid.push_back(x);
    const double e20 = scaling_limit_error(20, ScalingRegime::edge, grid);
    const double e50 = scaling_limit_error(50, ScalingRegime::edge, grid);
    const double e80 = scaling_limit_error(80, ScalingRegime::edge, grid);
    EXPECT_LT(e50, 5e-2);
    EXPECT_LT(e50, e20);
    EXPECT_LT(e80, e50);
}

TEST(ScalingLimits, BulkDiagonalAndSine) {
    for (int N : {20, 50, 80}) EXPECT_NEAR(rescaled_hermite_kernel(N, ScalingRegime::bulk, 0.0, 0.0), 1.0, 1e-14);
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    EXPECT_LT(scaling_limit_error(80, ScalingRegime::bulk, grid), scaling_limit_error(20, ScalingRegime::bulk, grid));
}
