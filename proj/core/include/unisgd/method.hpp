#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "unisgd/problem.hpp"
#include "unisgd/quantize.hpp"
#include "unisgd/sampling.hpp"

namespace unisgd {

enum class Method {
  sgd,
  sgd_mb,
  sgd_independent,
  sgd_star,
  saga,
  n_saga,
  sega,
  n_sega,
  svrg,
  l_svrg,
  diana,
  q_sgd_sr,
  vr_diana,
  convex_combination,
  random_switch,
};

Method parse_method(const std::string& name);
std::string to_string(Method m);

// Declarative description of a gradient estimator. Zero-valued knobs mean
// "use the standard default for this method" and are filled in by resolve().
struct MethodConfig {
  Method method = Method::sgd;
  ProbabilityRule probabilities = ProbabilityRule::uniform;
  std::vector<double> explicit_probabilities;
  std::size_t minibatch = 1;
  double noise_variance = 0.0;
  std::size_t epoch_length = 0;
  double refresh_probability = 0.0;
  Quantizer quantizer = Quantizer::identity();
  double alpha = 0.0;
  std::size_t nodes = 1;
  int variant = 1;
  std::vector<MethodConfig> children;
  std::vector<double> weights;
  bool independent = true;  // combinator parameter composition rule
};

// Fills defaults and validates against the problem; throws ConfigError.
MethodConfig resolve(const MethodConfig& config, const Problem& problem);

IndexDistribution sampling_distribution(const Problem& problem, const MethodConfig& config);
InclusionSampling inclusion_sampling(const Problem& problem, const MethodConfig& config);

}  // namespace unisgd
