#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "unisgd/driver.hpp"
#include "unisgd/errors.hpp"

namespace unisgd {
namespace {

Problem scalar_quadratic(double target) {
  RowMatrix a(1, 1);
  a << 1.0;
  Vector b(1);
  b << target;
  return Problem(Loss::squared, a, b);
}

RunConfig config_for(Method m, double step, std::size_t iterations) {
  RunConfig c;
  c.method.method = m;
  c.step = step;
  c.iterations = iterations;
  c.record_every = 1;
  c.threads = 1;
  return c;
}

TEST(Driver, ZeroGradientLeavesStartUnchanged) {
  const Problem p(Loss::squared, RowMatrix::Zero(4, 3), Vector::Zero(4));
  RunConfig c = config_for(Method::sgd, 0.5, 50);
  Vector start(3);
  start << 1, -2, 3;
  c.start = start;
  const auto result = run(p, nullptr, c);
  EXPECT_EQ(result.traces[0].final_point, start);
}

TEST(Driver, SingleComponentIsGradientDescent) {
  const Problem p = scalar_quadratic(3.0);
  const Reference ref = solve_reference(p);
  ASSERT_NEAR(ref.x(0), 3.0, 1e-12);
  const double step = 0.3;
  const auto result = run(p, &ref, config_for(Method::sgd, step, 40));
  const Trace& tr = result.traces[0];
  ASSERT_EQ(tr.iterations.size(), 41u);
  for (std::size_t k = 0; k <= 40; ++k) {
    const double expected = 9.0 * std::pow(1 - step, 2.0 * static_cast<double>(k));
    EXPECT_NEAR(tr.dist_sq[k], expected, 1e-12 * std::max(1.0, expected)) << k;
  }
}

TEST(Driver, DeterministicEstimatorHasZeroStderr) {
  const Problem p = scalar_quadratic(-1.0);
  const Reference ref = solve_reference(p);
  RunConfig c = config_for(Method::sgd, 0.5, 10);
  c.seeds = {1, 2, 3, 4};
  const auto result = run(p, &ref, c);
  for (double se : result.ensemble.dist_sq.stderr_) EXPECT_EQ(se, 0.0);
}

TEST(Driver, SameSeedsSameTracesAcrossThreadCounts) {
  const Problem p = testing::ridge_problem(20, 5, 0.1, 3);
  const Reference ref = solve_reference(p);
  RunConfig c = config_for(Method::saga, 0.2, 200);
  c.seeds = {5, 6, 7};
  const auto serial = run(p, &ref, c);
  c.threads = 3;
  const auto parallel = run(p, &ref, c);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(serial.traces[s].dist_sq, parallel.traces[s].dist_sq);
    EXPECT_EQ(serial.traces[s].final_point, parallel.traces[s].final_point);
  }
  EXPECT_NE(serial.traces[0].dist_sq.back(), serial.traces[1].dist_sq.back());
}

TEST(Driver, DuplicateSeedsRejected) {
  const Problem p = scalar_quadratic(1.0);
  RunConfig c = config_for(Method::sgd, 0.1, 5);
  c.seeds = {3, 4, 3};
  EXPECT_THROW(run(p, nullptr, c), ConfigError);
  c.seeds.clear();
  EXPECT_THROW(run(p, nullptr, c), ConfigError);
}

TEST(Driver, AggregateRejectsMismatchedTraces) {
  Trace a, b;
  a.iterations = {0, 1, 2};
  b.iterations = {0, 1};
  for (auto* t : {&a, &b}) {
    const std::size_t len = t->iterations.size();
    t->dist_sq = t->f_gap = t->rel_subopt = t->sigma_sq = t->lyapunov = std::vector<double>(len, 1.0);
  }
  EXPECT_THROW(aggregate({a, b}), ConfigError);
}

TEST(Driver, AggregateMoments) {
  Trace a, b;
  a.iterations = b.iterations = {0};
  a.dist_sq = {1.0};
  b.dist_sq = {3.0};
  for (auto* t : {&a, &b}) t->f_gap = t->rel_subopt = t->sigma_sq = t->lyapunov = {0.0};
  const Ensemble e = aggregate({a, b});
  EXPECT_DOUBLE_EQ(e.dist_sq.mean[0], 2.0);
  // sample sd sqrt(2), divided by sqrt(2)
  EXPECT_DOUBLE_EQ(e.dist_sq.stderr_[0], 1.0);
}

TEST(Driver, SagaLyapunovMatchesHandReplay) {
  const Problem p = testing::ridge_problem(6, 3, 0.2, 9);
  const Reference ref = solve_reference(p);
  const double step = 0.15;
  RunConfig c = config_for(Method::saga, step, 30);
  c.seeds = {11};
  const auto result = run(p, &ref, c);
  const double M = result.lyapunov_weight;
  EXPECT_EQ(M, 24.0);

  // Replay: same index stream, table kept explicitly.
  SeededSource rng(11);
  const std::size_t n = p.n();
  Vector x = Vector::Zero(3);
  RowMatrix table(6, 3);
  for (std::size_t i = 0; i < n; ++i) table.row(static_cast<Eigen::Index>(i)) = p.component_gradient(i, x).transpose();
  auto value = [&] {
    const double sigma = (table - ref.component_gradients).rowwise().squaredNorm().mean();
    return (x - ref.x).squaredNorm() + M * step * step * sigma;
  };
  const Trace& tr = result.traces[0];
  EXPECT_NEAR(tr.lyapunov[0], value(), 1e-12);
  for (std::size_t k = 0; k < 30; ++k) {
    const std::size_t j = rng.uniform_index(n, Stream::index);
    const auto row = static_cast<Eigen::Index>(j);
    const Vector fresh = p.component_gradient(j, x);
    const Vector g = fresh - table.row(row).transpose() + table.colwise().mean().transpose();
    table.row(row) = fresh.transpose();
    x -= step * g;
    EXPECT_NEAR(tr.lyapunov[k + 1], value(), 1e-12 * std::max(1.0, value())) << k;
  }
}

TEST(Driver, DivergenceReported) {
  const Problem p = testing::ridge_problem(10, 4, 0.0, 2, Regularizer::none(), false);
  RunConfig c = config_for(Method::sgd, 1e3, 1000);
  Vector start = Vector::Ones(4);
  c.start = start;
  try {
    run(p, nullptr, c);
    FAIL() << "expected divergence";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_LE(e.step(), 1000u);
  }
}

TEST(Driver, TheoryStepUsedByDefault) {
  const Problem p = testing::ridge_problem(10, 4, 0.1, 2);
  const Reference ref = solve_reference(p);
  RunConfig c;
  c.method.method = Method::saga;
  c.iterations = 1;
  const auto result = run(p, &ref, c);
  EXPECT_DOUBLE_EQ(result.step, std::min(1 / p.strong_convexity(), 1 / (6 * p.smoothness())));
  ASSERT_TRUE(result.predicted);
  EXPECT_TRUE(result.predicted->applicable);
}

TEST(Driver, RecurrenceNeedsHundredSeeds) {
  const Problem p = testing::ridge_problem(10, 4, 0.1, 2);
  const Reference ref = solve_reference(p);
  RunConfig c;
  c.method.method = Method::saga;
  c.iterations = 20;
  c.seeds = {1, 2, 3};
  const auto result = run(p, &ref, c);
  EXPECT_THROW(check_recurrence(result, p.strong_convexity()), ConfigError);
}

TEST(Driver, SagaRecurrenceHoldsOverManySeeds) {
  const Problem p = testing::ridge_problem(10, 4, 0.1, 2);
  const Reference ref = solve_reference(p);
  RunConfig c;
  c.method.method = Method::saga;
  c.iterations = 200;
  c.record_every = 10;
  c.threads = 1;
  c.seeds.clear();
  for (std::uint64_t s = 1; s <= 100; ++s) c.seeds.push_back(s);
  const auto result = run(p, &ref, c);
  EXPECT_TRUE(check_recurrence(result, p.strong_convexity()).ok);
}

}  // namespace
}  // namespace unisgd
