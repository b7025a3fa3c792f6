#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "unisgd/estimators.hpp"
#include "unisgd/method.hpp"
#include "unisgd/problem.hpp"
#include "unisgd/theory.hpp"

namespace unisgd {

struct RunConfig {
  MethodConfig method;
  std::optional<double> step;             // default: theoretical bound
  std::optional<double> lyapunov_weight;  // default: per-method M
  std::size_t iterations = 1000;
  std::vector<std::uint64_t> seeds{1};
  std::size_t record_every = 0;  // 0: max(1, iterations / 1000)
  bool diagnostics = true;       // sigma_k^2 and Lyapunov values
  std::optional<Vector> start;   // default: origin
  std::size_t threads = 0;       // 0: hardware concurrency
  double divergence_limit = 1e12;
};

// One row per recorded iteration. Missing quantities are NaN.
struct Trace {
  std::uint64_t seed = 0;
  std::vector<std::size_t> iterations;
  std::vector<double> dist_sq;
  std::vector<double> f_gap;
  std::vector<double> rel_subopt;
  std::vector<double> sigma_sq;
  std::vector<double> lyapunov;
  Vector final_point;
};

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stderr_;
};

struct Ensemble {
  std::vector<std::size_t> iterations;
  SeriesStats dist_sq, f_gap, rel_subopt, sigma_sq, lyapunov;
};

struct RunResult {
  MethodConfig method;  // resolved
  std::optional<ParamSet> params;
  double step = 0.0;
  double lyapunov_weight = 0.0;
  std::optional<RateReport> predicted;
  std::vector<Trace> traces;
  Ensemble ensemble;
};

struct StepChoice {
  double step;
  double lyapunov_weight;  // NaN when no parameter set exists
  std::optional<ParamSet> params;
};

StepChoice choose_step(const Problem& problem, const MethodConfig& resolved, const Reference* ref,
                       const RunConfig& config);

Trace run_trace(const Problem& problem, const Reference* ref, const MethodConfig& resolved, double step,
                double lyapunov_weight, const RunConfig& config, std::uint64_t seed);

// Runs every seed (in parallel when threads allow) and aggregates.
RunResult run(const Problem& problem, const Reference* ref, const RunConfig& config);

// Throws ConfigError for traces with different recorded iterations.
Ensemble aggregate(const std::vector<Trace>& traces);

// Recurrence check on the Lyapunov ensemble of a finished run; needs at
// least 100 seeds and a parameter set.
RecurrenceReport check_recurrence(const RunResult& result, double mu, double slack_se = 4.0);

}  // namespace unisgd
