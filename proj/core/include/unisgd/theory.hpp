#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "unisgd/method.hpp"
#include "unisgd/problem.hpp"

namespace unisgd {

// Constants of the two-inequality variance assumption:
//   E|g - grad f(x*)|^2 <= 2A D_f(x,x*) + B sigma_k^2 + D1
//   E sigma_{k+1}^2     <= (1 - rho) sigma_k^2 + 2C D_f(x,x*) + D2
struct ParamSet {
  double A = 0.0;
  double B = 0.0;
  double rho = 0.0;
  double C = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
};

struct RateReport {
  bool applicable = false;  // false when rho - B/M <= 0
  double contraction = 0.0;
  double neighborhood = 0.0;
  double complexity = 0.0;
};

// Smoothness constant each method's analysis refers to.
double method_smoothness(const MethodConfig& resolved, const Problem& problem);

// Parameters of the resolved method. D1 for the plain-sampling rows needs the
// reference point; without it those entries are NaN.
ParamSet method_params(const MethodConfig& resolved, const Problem& problem, const Reference* ref = nullptr);

// Per-method standard Lyapunov weight, or 2B/rho when no standard choice
// exists. Methods with B = 0 get M = 1; the weight is irrelevant there.
double default_lyapunov_weight(const MethodConfig& resolved, const Problem& problem, const ParamSet& params);

// min{1/mu, 1/(A + C M)}; throws unless M > B/rho.
double stepsize_bound(const ParamSet& params, double M, double mu);

// Throws when B > 0, rho > 0 and M <= B/rho; rho = 0 gives applicable = false.
RateReport rate(const ParamSet& params, double M, double gamma, double mu);

double lyapunov(double dist_sq, double sigma_sq, double M, double gamma);

// sigma^2 = sum_i p_i |grad f_i(x*) / (n p_i)|^2
double sampling_variance_at_optimum(const Problem& problem, const IndexDistribution& dist, const Reference& ref);

ParamSet compose_convex(std::span<const ParamSet> parts, std::span<const double> weights, bool independent,
                        double smoothness);
ParamSet compose_switch(std::span<const ParamSet> parts, std::span<const double> weights);
// Coefficients c_j with sigma^2 = sum_j c_j sigma_j^2 for the composite.
std::vector<double> composite_sigma_coefficients(std::span<const ParamSet> parts, std::span<const double> weights,
                                                 Method composite, bool independent);

// Averaged-iterate contraction over one SVRG epoch:
// D_f(avg) <= factor * D_f(x0), factor = 2(1/mu + 2 m gamma^2 L) / (m gamma (1 - 2 gamma L)).
double svrg_epoch_factor(double gamma, double smoothness, double mu, std::size_t epoch_length);

double vr_diana_alpha_limit(std::size_t inner, double omega);

struct SolveOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 5'000'000;
  std::optional<Vector> start;  // default: origin
};

// Deterministic proximal gradient descent with step 1/L(f).
Reference solve_reference(const Problem& problem, const SolveOptions& options = {});

struct RecurrenceReport {
  bool ok = true;
  std::vector<std::size_t> violations;  // recorded iteration numbers k with a failing k -> k+s step
  double worst_excess = 0.0;            // largest (lhs - rhs) / slack over all checks
};

// Checks E V_{k+s} <= c^s E V_k + (D1 + M D2) gamma^2 (1 + c + ... + c^{s-1}) with
// c = max{1 - gamma mu, 1 + B/M - rho}, allowing `slack_se` standard errors.
RecurrenceReport check_recurrence(std::span<const std::size_t> iterations, std::span<const double> mean_v,
                                  std::span<const double> stderr_v, const ParamSet& params, double M,
                                  double gamma, double mu, double slack_se = 4.0);

}  // namespace unisgd
