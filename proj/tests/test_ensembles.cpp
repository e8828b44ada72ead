#include "laxlab/ensembles.hpp"
#include "laxlab/error.hpp"
#include "laxlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace laxlab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// n = 2: int_{lo<x<y<hi} |x - y|^beta rho(x) rho(y), inner integral on [lo, y] so the kink sits at an endpoint
double ordered_pair_integral(const WeightSpec& w, int beta, double lo, double hi) {
    const auto outer = gauss_legendre_rule(160, lo, hi);
    double s = 0;
    for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
        const double y = outer.nodes[i];
        const auto inner = gauss_legendre_rule(160, lo, y);
        s += outer.weights[i] * w.density(y) *
             inner.integrate([&](double x) { return std::pow(y - x, beta) * w.density(x); });
    }
    return s;
}

} // namespace

TEST(GapProbability, TrivialValues) {
    for (int beta : {1, 2, 4}) {
        const EnsembleSpec e{beta, WeightSpec::gaussian(1.0), 2};
        EXPECT_NEAR(gap_probability(e, IntervalUnion::parse("-inf:inf")), 1.0, 1e-12);
        EXPECT_EQ(gap_probability(e, IntervalUnion()), 0.0);
    }
    for (int beta : {2, 4}) EXPECT_NEAR(gap_probability({beta, WeightSpec::gaussian(1.0), 1}, IntervalUnion::parse("-inf:0")), 0.5, 1e-13);
    EXPECT_EQ(gap_probability({2, WeightSpec::laguerre(1, 1), 2}, IntervalUnion::parse("-3:-1")), 0.0);
    EXPECT_THROW(gap_probability({1, WeightSpec::gaussian(1.0), 3}, IntervalUnion::parse("-inf:0")), Error);
}

TEST(GapProbability, PairsMatchTwoDimensionalQuadrature) {
    const auto w = WeightSpec::gaussian(1.0);
    for (int beta : {1, 2, 4}) {
        const double oracle = ordered_pair_integral(w, beta, -9, 0) / ordered_pair_integral(w, beta, -9, 9);
        EXPECT_NEAR(gap_probability({beta, w, 2}, IntervalUnion::parse("-inf:0")), oracle, 1e-8) << beta;
    }
    const auto l = WeightSpec::laguerre(1.0, 1.0);
    for (int beta : {1, 2, 4}) {
        const double oracle = ordered_pair_integral(l, beta, 0, 2.5) / ordered_pair_integral(l, beta, 0, 60);
        EXPECT_NEAR(gap_probability({beta, l, 2}, IntervalUnion::parse("0:2.5")), oracle, 1e-8) << beta;
    }
}

TEST(GapProbability, GramRouteAgrees) {
    const std::vector<std::pair<WeightSpec, std::string>> cases{
        {WeightSpec::gaussian(1.0), "-inf:0.4"},
        {WeightSpec::gaussian(0.6), "-1:0.5,1.2:inf"},
        {WeightSpec::laguerre(1.0, 1.0), "0:3"},
        {WeightSpec::laguerre(0.5, 2.0), "0:1,1.5:inf"},
    };
    for (const auto& [w, s] : cases)
        for (int n : {1, 3, 5}) {
            const EnsembleSpec e{2, w, n};
            const auto E = IntervalUnion::parse(s);
            EXPECT_NEAR(gap_probability_gram(e, E), gap_probability(e, E), 1e-10) << w.str() << " " << s << " " << n;
        }
}

TEST(GapProbability, BoundedAndMonotone) {
    for (int beta : {1, 2, 4}) {
        const EnsembleSpec e{beta, WeightSpec::gaussian(1.0), 2};
        double prev = 0;
        for (double x = -2; x <= 2; x += 0.5) {
            const double p = gap_probability(e, IntervalUnion({{-inf, x}}));
            EXPECT_GE(p, prev);
            EXPECT_LE(p, 1.0);
            prev = p;
        }
        EXPECT_LE(gap_probability(e, IntervalUnion::parse("-1:0,0.5:1")), gap_probability(e, IntervalUnion::parse("-1:1")));
    }
}

TEST(GapProbability, JetMatchesFiniteDifferences) {
    const double x = 0.3, h = 1e-4;
    for (int beta : {1, 2, 4}) {
        const EnsembleSpec e{beta, WeightSpec::gaussian(1.0), 2};
        auto p = [&](double c) { return gap_probability(e, IntervalUnion({{-inf, c}})); };
        const Jet J = gap_probability_jet(e, x, 2);
        EXPECT_NEAR(J.value(), p(x), 1e-12);
        EXPECT_NEAR(J.derivative({1}), (p(x + h) - p(x - h)) / (2 * h), 1e-7);
        EXPECT_NEAR(J.derivative({2}), (p(x + h) - 2 * p(x) + p(x - h)) / (h * h), 1e-4);
    }
    const EnsembleSpec e{4, WeightSpec::laguerre(1.0, 1.0), 2};
    const auto sp = make_jet_space(1, 1);
    const Jet J = gap_probability_jet(e, IntervalUnion::parse("0.5:2"), [&](double c) { return Jet::variable(sp, 0, c); });
    auto p = [&](double d) { return gap_probability(e, IntervalUnion({{0.5 + d, 2 + d}})); };
    EXPECT_NEAR(J.derivative({1}), (p(h) - p(-h)) / (2 * h), 1e-7);
}

TEST(Sampler, DeterministicAcrossThreadCounts) {
    for (int beta : {1, 2, 4}) {
        const EnsembleSpec e{beta, WeightSpec::gaussian(1.0), 3};
        const auto a = sample_ensemble(e, 200, 42, 1), b = sample_ensemble(e, 200, 42, 3);
        EXPECT_EQ(a.eigenvalues, b.eigenvalues);
        const auto one = sample_eigenvalues(e, 42, 17);
        for (int j = 0; j < 3; ++j) EXPECT_EQ(one[j], a.sample(17)[j]);
        EXPECT_NE(sample_ensemble(e, 10, 43, 1).eigenvalues, sample_ensemble(e, 10, 42, 1).eigenvalues);
    }
}

TEST(Sampler, TuplesSortedAndSymplecticPairsCollapsed) {
    const auto batch = sample_ensemble({4, WeightSpec::gaussian(1.0), 4}, 50, 7, 1);
    EXPECT_EQ(batch.eigenvalues.size(), 200u);
    for (int i = 0; i < 50; ++i)
        for (int j = 1; j < 4; ++j) EXPECT_LE(batch.sample(i)[j - 1], batch.sample(i)[j]);
}

TEST(Sampler, GaussianOneByOneMoment) {
    const double b = 0.8;
    const int count = 100000;
    const auto batch = sample_ensemble({2, WeightSpec::gaussian(b), 1}, count, 5, 1);
    double s = 0;
    for (double z : batch.eigenvalues) s += std::abs(z);
    const double mean = 1 / std::sqrt(M_PI * b), sd = std::sqrt(1 / (2 * b) - 1 / (M_PI * b));
    EXPECT_NEAR(s / count, mean, 3 * sd / std::sqrt(count));
}

TEST(Sampler, EmpiricalGapMatchesQuadrature) {
    const int count = 100000;
    const auto left = IntervalUnion::parse("-inf:0");
    for (int beta : {1, 2, 4}) {
        const EnsembleSpec e{beta, WeightSpec::gaussian(1.0), 2};
        const auto [p, se] = empirical_gap(sample_ensemble(e, count, 11), left);
        EXPECT_NEAR(p, gap_probability(e, left), 3 * se) << beta;
    }
    // laguerre parameters realizable with integer row counts
    const auto cut = IntervalUnion::parse("0:3");
    for (auto [beta, a] : std::vector<std::pair<int, double>>{{1, 1.0}, {2, 1.0}, {4, 3.0}}) {
        const EnsembleSpec e{beta, WeightSpec::laguerre(a, 1.0), 2};
        const auto [p, se] = empirical_gap(sample_ensemble(e, 40000, 12), cut);
        EXPECT_NEAR(p, gap_probability(e, cut), 3 * se) << beta;
    }
}

TEST(Sampler, EmpiricalGapEdgeCases) {
    const auto batch = sample_ensemble({2, WeightSpec::gaussian(1.0), 2}, 100, 1, 1);
    const auto full = empirical_gap(batch, IntervalUnion::parse("-inf:inf"));
    EXPECT_EQ(full.first, 1.0);
    EXPECT_EQ(full.second, 0.0);
    const auto none = empirical_gap(batch, IntervalUnion());
    EXPECT_EQ(none.first, 0.0);
    EXPECT_EQ(none.second, 0.0);
}

TEST(Sampler, LaguerreNeedsIntegerRows) {
    EXPECT_THROW(sample_ensemble({2, WeightSpec::laguerre(0.5, 1.0), 2}, 10, 1, 1), Error);
}

TEST(Sampler, ThreadCountFromEnvironment) {
    setenv("LAXLAB_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3);
    unsetenv("LAXLAB_THREADS");
    EXPECT_EQ(default_thread_count(), 1);
}
