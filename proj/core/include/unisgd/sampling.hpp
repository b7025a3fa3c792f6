#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unisgd/problem.hpp"
#include "unisgd/random.hpp"

namespace unisgd {

// Immutable distribution over {0, ..., n-1}. Draws use the inverse CDF on a
// cumulative array: u in [0,1) selects the smallest i with cumulative(i) > u.
class IndexDistribution {
 public:
  explicit IndexDistribution(std::vector<double> probabilities);
  static IndexDistribution uniform(std::size_t n);
  static IndexDistribution from_weights(std::span<const double> weights);

  std::size_t size() const { return probs_.size(); }
  double probability(std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probabilities() const { return probs_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  bool is_uniform() const { return uniform_; }

  std::size_t index_for(double u) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  bool uniform_ = false;
};

std::vector<std::size_t> draw_with_replacement(const IndexDistribution& dist, std::size_t count,
                                               RandomSource& rng);

// Each index enters the sample independently with its own probability.
class InclusionSampling {
 public:
  explicit InclusionSampling(std::vector<double> inclusion);
  static InclusionSampling uniform(std::size_t n, std::size_t expected_size);

  std::size_t size() const { return q_.size(); }
  double inclusion(std::size_t i) const { return q_[i]; }
  const std::vector<double>& inclusions() const { return q_; }
  double expected_size() const;

  std::vector<std::size_t> draw(RandomSource& rng) const;

 private:
  std::vector<double> q_;
};

enum class ProbabilityRule { uniform, importance };

struct ImportanceWeights {
  std::vector<double> values;  // per-index probabilities (sum 1) or inclusions (sum tau)
  double shift = 0.0;          // the delta solving the normalization
  bool fallback = false;       // no root with delta >= 0; renormalized at delta = 0
};

// p_i proportional to w_i / (delta + w_i) with w_i = |a_i|^2 + lambda, delta >= 0
// chosen so that sum_i p_i equals `target`.
ImportanceWeights importance_weights(std::span<const double> row_norms_sq, double lambda, double target);

IndexDistribution importance_probs(std::span<const double> row_norms_sq, double lambda, ProbabilityRule rule);
InclusionSampling inclusion_probs(std::span<const double> row_norms_sq, double lambda, ProbabilityRule rule,
                                  std::size_t expected_size);

// max_i L_i / (n p_i)
double expected_smoothness(const Problem& problem, const IndexDistribution& dist);

std::vector<double> row_norms_sq(const Problem& problem);

}  // namespace unisgd
