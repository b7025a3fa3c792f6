#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <numeric>

#include "enumerator.hpp"
#include "fixtures.hpp"
#include "unisgd/problem.hpp"
#include "unisgd/sampling.hpp"
#include "unisgd/theory.hpp"

namespace unisgd {
namespace {

// Naive inverse-CDF oracle: linear scan for the smallest i with cum_i > u.
std::size_t linear_scan(const std::vector<double>& p, double u) {
  double cum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cum += p[i];
    if (cum > u) return i;
  }
  return p.size() - 1;
}

TEST(IndexDistributionTest, Validation) {
  EXPECT_THROW(IndexDistribution({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(IndexDistribution({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(IndexDistribution(std::vector<double>{}), std::invalid_argument);
  EXPECT_NO_THROW(IndexDistribution({0.25, 0.75}));
}

TEST(Draw, SingleIndex) {
  SeededSource rng(1);
  for (auto i : draw_with_replacement(IndexDistribution::uniform(1), 100, rng)) EXPECT_EQ(i, 0u);
}

TEST(Draw, UniformFourChiSquare) {
  SeededSource rng(2);
  const std::size_t draws = 100000;
  std::vector<double> counts(4, 0);
  for (auto i : draw_with_replacement(IndexDistribution::uniform(4), draws, rng)) counts[i] += 1;
  double chi = 0;
  for (double c : counts) chi += (c - draws / 4.0) * (c - draws / 4.0) / (draws / 4.0);
  EXPECT_LT(chi, boost::math::quantile(boost::math::chi_squared(3), 0.99));
}

TEST(Draw, SkewedBinomialBand) {
  SeededSource rng(3);
  const std::size_t draws = 100000;
  const auto idx = draw_with_replacement(IndexDistribution({0.9, 0.1}), draws, rng);
  const double freq = static_cast<double>(std::count(idx.begin(), idx.end(), 0u)) / draws;
  EXPECT_GE(freq, 0.894);
  EXPECT_LE(freq, 0.906);
}

TEST(Draw, MatchesLinearScanOracle) {
  std::vector<double> w{0.1, 0.3, 0.05, 0.25, 0.3};
  IndexDistribution dist(w);
  for (int t = 0; t < 10000; ++t) {
    const double u = (t + 0.5) / 10000.0;
    EXPECT_EQ(dist.index_for(u), linear_scan(w, u));
  }
  // Same raw bits through the source and through the oracle.
  SeededSource a(4);
  Xoshiro256 raw(derive_seed(derive_seed(4, 0), 0));
  for (int t = 0; t < 1000; ++t) EXPECT_EQ(a.sample(dist, Stream::index), linear_scan(w, to_unit_interval(raw())));
}

TEST(Importance, IdenticalNormsGiveUniform) {
  std::vector<double> norms(6, 2.5);
  const auto dist = importance_probs(norms, 0.1, ProbabilityRule::importance);
  for (double p : dist.probabilities()) EXPECT_NEAR(p, 1.0 / 6, 1e-12);
}

TEST(Importance, TwoRowRoot) {
  // Weights 1 and 3: 1/(d+1) + 3/(d+3) = 1 gives d^2 = 3.
  std::vector<double> norms{1.0, 3.0};
  const auto w = importance_weights(norms, 0.0, 1.0);
  EXPECT_FALSE(w.fallback);
  EXPECT_NEAR(w.shift, std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(w.values[0], 1 / (1 + std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(w.values[1], 3 / (3 + std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(w.values[0] + w.values[1], 1.0, 1e-12);
}

TEST(Importance, FallbackWhenNoRoot) {
  // The weight sum is below the target already at delta = 0.
  std::vector<double> norms{1.0, 3.0, 0.5};
  const auto w = importance_weights(norms, 0.0, 3.5);
  EXPECT_TRUE(w.fallback);
  EXPECT_EQ(w.shift, 0.0);
  EXPECT_THROW(importance_weights(std::vector<double>{0.0, 1.0}, 0.0, 1.0), std::invalid_argument);
}

TEST(Importance, ProbabilitiesSumToOne) {
  SeededSource rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> norms(30);
    for (auto& v : norms) v = std::exp(3 * rng.normal(Stream::noise));
    const auto dist = importance_probs(norms, 0.01, ProbabilityRule::importance);
    const auto& p = dist.probabilities();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Inclusion, SumsToExpectedSize) {
  std::vector<double> norms{0.5, 1, 2, 4, 8, 16, 0.1, 0.2};
  const auto s = inclusion_probs(norms, 0.0, ProbabilityRule::importance, 3);
  EXPECT_NEAR(s.expected_size(), 3.0, 1e-10);
  for (double q : s.inclusions()) {
    EXPECT_GT(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
  const auto u = inclusion_probs(norms, 0.0, ProbabilityRule::uniform, 4);
  for (double q : u.inclusions()) EXPECT_DOUBLE_EQ(q, 0.5);
}

TEST(Inclusion, EmpiricalSize) {
  SeededSource rng(6);
  const auto s = InclusionSampling::uniform(50, 10);
  double total = 0;
  for (int t = 0; t < 20000; ++t) total += static_cast<double>(s.draw(rng).size());
  // Size is Binomial(50, 0.2): sd 2.83, stderr over 2e4 draws 0.02.
  EXPECT_NEAR(total / 20000, 10.0, 0.08);
}

TEST(ExpectedSmoothness, UniformEqualConstants) {
  auto p = testing::ridge_problem(10, 4, 0.0, 7);  // unit rows: L_i = 1
  EXPECT_NEAR(expected_smoothness(p, IndexDistribution::uniform(10)), 1.0, 1e-12);
}

TEST(ExpectedSmoothness, ProportionalSamplingGivesMean) {
  auto p = testing::ridge_problem(10, 4, 0.0, 8, Regularizer::none(), false);
  const Vector& L = p.component_smoothness();
  std::vector<double> w(L.data(), L.data() + L.size());
  const auto dist = IndexDistribution::from_weights(w);
  EXPECT_NEAR(expected_smoothness(p, dist), L.mean(), 1e-12);
}

TEST(ExpectedSmoothness, EnumeratedBoundAtRandomPoints) {
  auto p = testing::ridge_problem(6, 3, 0.05, 9, Regularizer::none(), false);
  const Reference ref = solve_reference(p);
  std::vector<double> w{1, 2, 3, 1, 5, 0.5};
  const auto dist = IndexDistribution::from_weights(w);
  const double ell = expected_smoothness(p, dist);
  const double n = 6;
  SeededSource rng(9);
  for (int t = 0; t < 20; ++t) {
    const Vector x = ref.x + testing::random_vector(3, rng);
    double lhs = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      const double s = 1 / (n * dist.probability(i));
      lhs += dist.probability(i) * (s * (p.component_gradient(i, x) - p.component_gradient(i, ref.x))).squaredNorm();
    }
    EXPECT_LE(lhs, 2 * ell * bregman(p, x, ref.x) * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace unisgd
