#include "unisgd/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "unisgd/errors.hpp"

namespace unisgd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SeriesStats stats_of(const std::vector<Trace>& traces, std::vector<double> Trace::*field) {
  SeriesStats s;
  if (traces.empty()) return s;
  const std::size_t len = (traces.front().*field).size();
  const auto count = static_cast<double>(traces.size());
  s.mean.assign(len, 0.0);
  s.stderr_.assign(len, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& tr : traces) sum += (tr.*field)[t];
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& tr : traces) ss += ((tr.*field)[t] - mean) * ((tr.*field)[t] - mean);
    s.mean[t] = mean;
    s.stderr_[t] = traces.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
  }
  return s;
}

}  // namespace

StepChoice choose_step(const Problem& problem, const MethodConfig& resolved, const Reference* ref,
                       const RunConfig& config) {
  StepChoice choice{kNaN, kNaN, std::nullopt};
  try {
    choice.params = method_params(resolved, problem, ref);
  } catch (const ConfigError&) {
    if (!config.step) throw;
  }
  if (choice.params) {
    choice.lyapunov_weight = config.lyapunov_weight.value_or(default_lyapunov_weight(resolved, problem, *choice.params));
  }
  if (config.step) {
    choice.step = *config.step;
  } else if (resolved.method == Method::svrg) {
    // No memory contraction, so no Lyapunov bound; use a step inside the epoch analysis.
    choice.step = 1.0 / (10.0 * method_smoothness(resolved, problem));
  } else {
    choice.step = stepsize_bound(*choice.params, choice.lyapunov_weight, problem.strong_convexity());
  }
  if (!(choice.step > 0.0) || !std::isfinite(choice.step)) throw ConfigError("step size must be positive");
  return choice;
}

Trace run_trace(const Problem& problem, const Reference* ref, const MethodConfig& resolved, double step,
                double lyapunov_weight, const RunConfig& config, std::uint64_t seed) {
  auto estimator = make_estimator(problem, resolved, ref);
  SeededSource rng(seed);
  const Regularizer& reg = problem.regularizer();
  Vector x = config.start ? *config.start : Vector::Zero(static_cast<Eigen::Index>(problem.d()));
  if (x.size() != static_cast<Eigen::Index>(problem.d())) throw ConfigError("start point has wrong dimension");
  estimator->initialize(x, rng);

  const std::size_t stride = config.record_every ? config.record_every : std::max<std::size_t>(1, config.iterations / 1000);
  Trace tr;
  tr.seed = seed;
  double initial_gap = kNaN;
  auto record = [&](std::size_t k) {
    tr.iterations.push_back(k);
    const double dist = ref ? (x - ref->x).squaredNorm() : kNaN;
    const double gap = ref ? problem.objective(x) - ref->objective : kNaN;
    if (k == 0) initial_gap = gap;
    tr.dist_sq.push_back(dist);
    tr.f_gap.push_back(gap);
    tr.rel_subopt.push_back(gap / initial_gap);
    const double sigma = (config.diagnostics && ref) ? estimator->sigma_sq(*ref) : kNaN;
    tr.sigma_sq.push_back(sigma);
    tr.lyapunov.push_back(config.diagnostics ? lyapunov(dist, sigma, lyapunov_weight, step) : kNaN);
  };

  record(0);
  for (std::size_t k = 0; k < config.iterations; ++k) {
    estimator->prepare(x);
    const Vector g = estimator->next(x, rng);
    x = reg.prox(step, x - step * g);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > config.divergence_limit)
      throw NumericalError(k + 1, g.norm(), "iterate diverged (|x| = " + std::to_string(norm) + ")");
    if ((k + 1) % stride == 0 || k + 1 == config.iterations) record(k + 1);
  }
  tr.final_point = x;
  return tr;
}

Ensemble aggregate(const std::vector<Trace>& traces) {
  Ensemble e;
  if (traces.empty()) return e;
  for (const auto& tr : traces)
    if (tr.iterations != traces.front().iterations) throw ConfigError("traces have different recorded iterations");
  e.iterations = traces.front().iterations;
  e.dist_sq = stats_of(traces, &Trace::dist_sq);
  e.f_gap = stats_of(traces, &Trace::f_gap);
  e.rel_subopt = stats_of(traces, &Trace::rel_subopt);
  e.sigma_sq = stats_of(traces, &Trace::sigma_sq);
  e.lyapunov = stats_of(traces, &Trace::lyapunov);
  return e;
}

RunResult run(const Problem& problem, const Reference* ref, const RunConfig& config) {
  if (config.seeds.empty()) throw ConfigError("no seeds");
  {
    auto sorted = config.seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ConfigError("seeds must be distinct");
  }
  RunResult result;
  result.method = resolve(config.method, problem);
  const StepChoice choice = choose_step(problem, result.method, ref, config);
  result.step = choice.step;
  result.lyapunov_weight = choice.lyapunov_weight;
  result.params = choice.params;
  if (choice.params) result.predicted = rate(*choice.params, choice.lyapunov_weight, choice.step, problem.strong_convexity());

  result.traces.resize(config.seeds.size());
  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < config.seeds.size();) {
      try {
        result.traces[i] = run_trace(problem, ref, result.method, result.step, result.lyapunov_weight, config,
                                     config.seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.seeds.size();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  result.ensemble = aggregate(result.traces);
  return result;
}

RecurrenceReport check_recurrence(const RunResult& result, double mu, double slack_se) {
  if (result.traces.size() < 100) throw ConfigError("recurrence check needs at least 100 seeds");
  if (!result.params) throw ConfigError("recurrence check needs a parameter set");
  const Ensemble& e = result.ensemble;
  return check_recurrence(e.iterations, e.lyapunov.mean, e.lyapunov.stderr_, *result.params, result.lyapunov_weight,
                          result.step, mu, slack_se);
}

}  // namespace unisgd
