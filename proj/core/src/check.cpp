#include "unisgd/check.hpp"

#include <algorithm>
#include <cmath>

#include "unisgd/errors.hpp"

namespace unisgd {

namespace {

// Welford's update; exact zero spread for constant samples.
struct Moments {
  double mean_ = 0.0, m2 = 0.0;
  std::size_t count = 0;
  void add(double v) {
    ++count;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count);
    m2 += delta * (v - mean_);
  }
  double mean() const { return mean_; }
  double stderr_() const {
    const auto c = static_cast<double>(count);
    return std::sqrt(std::max(0.0, m2 / (c - 1.0)) / c);
  }
};

Vector random_point(const Reference& ref, double radius, RandomSource& rng) {
  Vector z(ref.x.size());
  for (auto& v : z) v = rng.normal(Stream::noise);
  const double norm = z.norm();
  if (norm > 0) z /= norm;
  const double scale = radius * std::pow(10.0, -3.0 + 3.0 * rng.uniform01(Stream::noise));
  return ref.x + scale * z;
}

}  // namespace

StateCheck check_state(const Estimator& estimator, const Problem& problem, const Reference& ref,
                       const ParamSet& params, const Vector& x, std::size_t samples, RandomSource& rng,
                       double slack_se) {
  if (samples < 2) throw ConfigError("check needs at least two samples");
  StateCheck out;
  out.bregman = std::max(0.0, bregman(problem, x, ref.x));
  out.sigma_sq = estimator.sigma_sq(ref);
  Moments grad, memory;
  for (std::size_t s = 0; s < samples; ++s) {
    auto copy = estimator.clone();
    const Vector g = copy->next(x, rng);
    grad.add((g - ref.gradient).squaredNorm());
    memory.add(copy->sigma_sq(ref));
  }
  out.gradient_lhs = grad.mean();
  out.gradient_se = grad.stderr_();
  out.gradient_rhs = 2.0 * params.A * out.bregman + params.B * out.sigma_sq + params.D1;
  out.memory_lhs = memory.mean();
  out.memory_se = memory.stderr_();
  out.memory_rhs = (1.0 - params.rho) * out.sigma_sq + 2.0 * params.C * out.bregman + params.D2;
  // A relative floor absorbs rounding when both sides are exactly equal.
  const double tiny = 1e-12;
  out.gradient_ok = out.gradient_lhs <= out.gradient_rhs + slack_se * out.gradient_se + tiny * (1 + out.gradient_rhs);
  out.memory_ok = out.memory_lhs <= out.memory_rhs + slack_se * out.memory_se + tiny * (1 + out.memory_rhs);
  return out;
}

AssumptionReport check_assumption(const Problem& problem, const MethodConfig& resolved, const Reference& ref,
                                  const ParamSet& params, const CheckOptions& options) {
  if (options.samples < 10000) throw ConfigError("check budget must be at least 10000 samples");
  if (options.states == 0) throw ConfigError("check needs at least one state");
  AssumptionReport report;
  const double radius = 10.0 * std::max(1.0, ref.x.norm());
  const std::size_t warmup = 2 * problem.n() + problem.d();
  for (std::size_t state = 0; state < options.states; ++state) {
    SeededSource rng(options.seed, 1000 + state);
    auto estimator = make_estimator(problem, resolved, &ref);
    estimator->initialize(random_point(ref, radius, rng), rng);
    for (std::size_t k = 0; k < warmup; ++k) estimator->next(random_point(ref, radius, rng), rng);
    const Vector x = random_point(ref, radius, rng);
    SeededSource sample_rng(options.seed, 2000 + state);
    auto result = check_state(*estimator, problem, ref, params, x, options.samples, sample_rng, options.slack_se);
    report.gradient_passes += result.gradient_ok;
    report.memory_passes += result.memory_ok;
    report.states.push_back(result);
  }
  return report;
}

}  // namespace unisgd
