#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "unisgd/estimators.hpp"
#include "unisgd/method.hpp"
#include "unisgd/problem.hpp"
#include "unisgd/random.hpp"
#include "unisgd/theory.hpp"

namespace unisgd {

// Monte Carlo estimate of both sides of the two variance inequalities at one
// (estimator state, x) pair. "gradient" refers to
//   E|g - grad f(x*)|^2 <= 2A D + B sigma_k^2 + D1,
// "memory" to
//   E sigma_{k+1}^2 <= (1 - rho) sigma_k^2 + 2C D + D2.
struct StateCheck {
  double bregman = 0.0;
  double sigma_sq = 0.0;
  double gradient_lhs = 0.0, gradient_se = 0.0, gradient_rhs = 0.0;
  double memory_lhs = 0.0, memory_se = 0.0, memory_rhs = 0.0;
  bool gradient_ok = false;
  bool memory_ok = false;
};

// The estimator is cloned per sample; `slack_se` standard errors are allowed.
StateCheck check_state(const Estimator& estimator, const Problem& problem, const Reference& ref,
                       const ParamSet& params, const Vector& x, std::size_t samples, RandomSource& rng,
                       double slack_se = 4.0);

struct CheckOptions {
  std::size_t samples = 100000;
  std::size_t states = 20;
  std::uint64_t seed = 1;
  double slack_se = 4.0;
};

struct AssumptionReport {
  std::vector<StateCheck> states;
  std::size_t gradient_passes = 0;
  std::size_t memory_passes = 0;
  bool ok() const { return gradient_passes == states.size() && memory_passes == states.size(); }
};

// Random states: the estimator is driven through 2n + d steps at points
// x* + s z (z on the unit sphere, s log-uniform over three decades), then
// checked at one more such point. Throws ConfigError when samples < 1e4.
AssumptionReport check_assumption(const Problem& problem, const MethodConfig& resolved, const Reference& ref,
                                  const ParamSet& params, const CheckOptions& options);

}  // namespace unisgd
