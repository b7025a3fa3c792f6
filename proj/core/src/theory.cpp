#include "unisgd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unisgd/errors.hpp"

namespace unisgd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double node_smoothness(const MethodConfig& c, const Problem& p) {
  if (c.nodes <= 1) return p.mean_smoothness();
  const std::size_t block = p.n() / c.nodes;
  double best = 0.0;
  for (std::size_t node = 0; node < c.nodes; ++node)
    best = std::max(best, p.block_smoothness(node * block, (node + 1) * block));
  return best;
}

double plain_sigma(const Problem& p, const MethodConfig& c, const Reference* ref) {
  if (!ref) return kNaN;
  return sampling_variance_at_optimum(p, sampling_distribution(p, c), *ref);
}

}  // namespace

double method_smoothness(const MethodConfig& c, const Problem& p) {
  switch (c.method) {
    case Method::sgd:
    case Method::sgd_mb:
    case Method::sgd_star:
    case Method::q_sgd_sr:
      return expected_smoothness(p, sampling_distribution(p, c));
    case Method::saga:
    case Method::n_saga:
    case Method::svrg:
    case Method::l_svrg:
    case Method::vr_diana:
      return p.smoothness();
    case Method::sega:
    case Method::n_sega:
    case Method::convex_combination:
    case Method::random_switch:
      return p.mean_smoothness();
    case Method::diana:
      return node_smoothness(c, p);
    case Method::sgd_independent:
      break;
  }
  throw ConfigError(to_string(c.method) + ": no parameter set available");
}

double sampling_variance_at_optimum(const Problem& problem, const IndexDistribution& dist, const Reference& ref) {
  const auto n = static_cast<double>(problem.n());
  double s = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i) {
    const double p = dist.probability(i);
    s += ref.component_gradients.row(static_cast<Eigen::Index>(i)).squaredNorm() / (n * n * p);
  }
  return s;
}

ParamSet method_params(const MethodConfig& c, const Problem& p, const Reference* ref) {
  const auto n = static_cast<double>(p.n());
  const auto d = static_cast<double>(p.d());
  const double omega = c.quantizer.omega(p.d());
  const double var = c.noise_variance;
  const double L = method_smoothness(c, p);
  switch (c.method) {
    case Method::sgd:
      return {2 * L, 0, 1, 0, 2 * plain_sigma(p, c, ref), 0};
    case Method::sgd_mb: {
      const auto tau = static_cast<double>(c.minibatch);
      return {(2 * L + p.mean_smoothness() * (tau - 1)) / tau, 0, 1, 0, 2 * plain_sigma(p, c, ref) / tau, 0};
    }
    case Method::sgd_star:
      return {2 * L, 0, 1, 0, 0, 0};
    case Method::saga:
      return {2 * L, 2, 1 / n, L / n, 0, 0};
    case Method::n_saga:
      return {2 * L, 2, 1 / n, L / n, 2 * var, var / n};
    case Method::sega:
      return {2 * d * L, 2 * d, 1 / d, L / d, 0, 0};
    case Method::n_sega:
      return {2 * d * L, 2 * d, 1 / d, L / d, 2 * d * var, var / d};
    case Method::svrg:
      return {2 * L, 2, 0, 0, 0, 0};
    case Method::l_svrg: {
      const double q = c.refresh_probability;
      return {2 * L, 2, q, L * q, 0, 0};
    }
    case Method::diana: {
      const auto nodes = static_cast<double>(c.nodes);
      const double a = c.alpha;
      return {(1 + 2 * omega / nodes) * L, 2 * omega / nodes, a, L * a, (1 + omega) * var / nodes, a * var};
    }
    case Method::q_sgd_sr:
      return {2 * (1 + omega) * L, 0, 1, 0, 2 * (1 + omega) * plain_sigma(p, c, ref), 0};
    case Method::vr_diana: {
      const auto nodes = static_cast<double>(c.nodes);
      const double m = n / nodes;
      const double a = c.alpha;
      return {(1 + (4 * omega + 2) / nodes) * L, 2 * (omega + 1) / nodes, a, (1 / m + 4 * a) * L, 0, 0};
    }
    case Method::convex_combination:
    case Method::random_switch: {
      std::vector<ParamSet> parts;
      for (const auto& child : c.children) parts.push_back(method_params(child, p, ref));
      if (c.method == Method::random_switch && !c.independent) return compose_switch(parts, c.weights);
      return compose_convex(parts, c.weights, c.independent, L);
    }
    case Method::sgd_independent:
      break;
  }
  throw ConfigError(to_string(c.method) + ": no parameter set available");
}

double default_lyapunov_weight(const MethodConfig& c, const Problem& p, const ParamSet& params) {
  if (params.B == 0.0) return 1.0;
  const auto n = static_cast<double>(p.n());
  const auto d = static_cast<double>(p.d());
  const double omega = c.quantizer.omega(p.d());
  double M = kNaN;
  switch (c.method) {
    case Method::saga:
    case Method::n_saga:
      M = 4 * n;
      break;
    case Method::sega:
    case Method::n_sega:
      M = 4 * d * d;
      break;
    case Method::l_svrg:
      M = 4 / c.refresh_probability;
      break;
    case Method::diana:
      M = 4 * omega * (omega + 1) / static_cast<double>(c.nodes);
      break;
    case Method::vr_diana:
      M = 4 * (omega + 1) / (static_cast<double>(c.nodes) * c.alpha);
      break;
    default:
      break;
  }
  if (params.rho <= 0.0) return std::isnan(M) ? 0.0 : M;
  if (std::isnan(M) || !(M > params.B / params.rho)) M = 2 * params.B / params.rho;
  return M;
}

double stepsize_bound(const ParamSet& params, double M, double mu) {
  if (!(mu > 0.0)) throw ConfigError("stepsize bound needs strong convexity mu > 0");
  if (params.B > 0.0 && !(params.rho > 0.0 && M > params.B / params.rho))
    throw ConfigError("Lyapunov weight must exceed B/rho");
  return std::min(1.0 / mu, 1.0 / (params.A + params.C * M));
}

RateReport rate(const ParamSet& params, double M, double gamma, double mu) {
  if (params.rho > 0.0 && params.B > 0.0 && !(M > params.B / params.rho))
    throw ConfigError("Lyapunov weight must exceed B/rho");
  RateReport r;
  const double memory_gap = params.rho - (params.B > 0.0 ? params.B / M : 0.0);
  const double denom = std::min(gamma * mu, memory_gap);
  r.contraction = std::max(1.0 - gamma * mu, 1.0 - memory_gap);
  r.applicable = denom > 0.0;
  if (!r.applicable) {
    r.neighborhood = std::numeric_limits<double>::infinity();
    r.complexity = std::numeric_limits<double>::infinity();
    return r;
  }
  const double weighted_d2 = params.D2 == 0.0 ? 0.0 : M * params.D2;
  r.neighborhood = (params.D1 + weighted_d2) * gamma * gamma / denom;
  r.complexity = 1.0 / denom;
  return r;
}

double lyapunov(double dist_sq, double sigma_sq, double M, double gamma) {
  return dist_sq + M * gamma * gamma * sigma_sq;
}

ParamSet compose_convex(std::span<const ParamSet> parts, std::span<const double> weights, bool independent,
                        double smoothness) {
  if (parts.empty() || parts.size() != weights.size()) throw std::invalid_argument("one weight per part");
  ParamSet out;
  out.B = 1.0;
  out.rho = std::numeric_limits<double>::infinity();
  out.A = independent ? smoothness : 0.0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double w = independent ? weights[j] * weights[j] : weights[j];
    const ParamSet& q = parts[j];
    out.A += w * q.A;
    out.C += w * q.C * q.B;
    out.D1 += w * q.D1;
    out.D2 += w * q.D2 * q.B;
    out.rho = std::min(out.rho, q.rho);
  }
  return out;
}

ParamSet compose_switch(std::span<const ParamSet> parts, std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) throw std::invalid_argument("one weight per part");
  ParamSet out;
  out.B = 1.0;
  out.rho = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const ParamSet& q = parts[j];
    out.A += weights[j] * q.A;
    out.C += weights[j] * q.B * q.C;
    out.D1 += weights[j] * q.D1;
    out.D2 += weights[j] * q.B * q.D2;
    out.rho = std::min(out.rho, q.rho);
  }
  return out;
}

std::vector<double> composite_sigma_coefficients(std::span<const ParamSet> parts, std::span<const double> weights,
                                                 Method composite, bool independent) {
  (void)composite;
  std::vector<double> coef(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j)
    coef[j] = parts[j].B * (independent ? weights[j] * weights[j] : weights[j]);
  return coef;
}

double svrg_epoch_factor(double gamma, double smoothness, double mu, std::size_t epoch_length) {
  const auto m = static_cast<double>(epoch_length);
  const double denom = m * gamma * (1.0 - 2.0 * gamma * smoothness);
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 / mu + 2.0 * m * gamma * gamma * smoothness) / denom;
}

double vr_diana_alpha_limit(std::size_t inner, double omega) {
  return std::min(1.0 / (3.0 * static_cast<double>(inner)), 1.0 / (omega + 1.0));
}

Reference solve_reference(const Problem& problem, const SolveOptions& options) {
  const double step = 1.0 / problem.mean_smoothness();
  Vector x = options.start ? *options.start : Vector::Zero(static_cast<Eigen::Index>(problem.d()));
  if (x.size() != static_cast<Eigen::Index>(problem.d())) throw ConfigError("start point has wrong dimension");
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    Vector next = problem.regularizer().prox(step, x - step * problem.gradient(x));
    const double move = (next - x).norm() / step;
    x = std::move(next);
    if (!x.allFinite()) throw NumericalError(it, x.norm(), "reference solve diverged");
    if (move < options.tolerance * std::max(1.0, x.norm())) break;
  }
  if (it == options.max_iterations) throw NumericalError(it, x.norm(), "reference solve did not converge");
  Reference ref = reference_at(problem, x);
  ref.iterations = it + 1;
  return ref;
}

RecurrenceReport check_recurrence(std::span<const std::size_t> iterations, std::span<const double> mean_v,
                                  std::span<const double> stderr_v, const ParamSet& params, double M,
                                  double gamma, double mu, double slack_se) {
  if (iterations.size() != mean_v.size() || iterations.size() != stderr_v.size())
    throw std::invalid_argument("series length mismatch");
  const double c = rate(params, M, gamma, mu).contraction;
  const double drift = (params.D1 + (params.D2 == 0.0 ? 0.0 : M * params.D2)) * gamma * gamma;
  RecurrenceReport report;
  for (std::size_t t = 0; t + 1 < iterations.size(); ++t) {
    const auto s = static_cast<double>(iterations[t + 1] - iterations[t]);
    const double cs = std::pow(c, s);
    const double geometric = c == 1.0 ? s : (1.0 - cs) / (1.0 - c);
    const double rhs = cs * mean_v[t] + drift * geometric;
    const double slack = slack_se * (stderr_v[t + 1] + cs * stderr_v[t]) + 1e-12 * std::abs(rhs);
    const double excess = mean_v[t + 1] - rhs;
    const double scaled = slack > 0.0 ? excess / slack : (excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.worst_excess = t == 0 ? scaled : std::max(report.worst_excess, scaled);
    if (excess > slack) {
      report.ok = false;
      report.violations.push_back(iterations[t]);
    }
  }
  return report;
}

}  // namespace unisgd
