#include "unisgd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace unisgd {

IndexDistribution::IndexDistribution(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  if (probs_.empty()) throw std::invalid_argument("empty distribution");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to one");
  cumulative_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
  uniform_ = std::all_of(probs_.begin(), probs_.end(), [&](double p) { return p == probs_.front(); });
}

IndexDistribution IndexDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty distribution");
  return IndexDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

IndexDistribution IndexDistribution::from_weights(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("weights must have positive sum");
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= total;
  return IndexDistribution(std::move(p));
}

std::size_t IndexDistribution::index_for(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return cumulative_.size() - 1;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<std::size_t> draw_with_replacement(const IndexDistribution& dist, std::size_t count,
                                               RandomSource& rng) {
  std::vector<std::size_t> out(count);
  for (auto& idx : out) idx = rng.sample(dist, Stream::index);
  return out;
}

InclusionSampling::InclusionSampling(std::vector<double> inclusion) : q_(std::move(inclusion)) {
  if (q_.empty()) throw std::invalid_argument("empty sampling");
  for (double q : q_)
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("inclusion probabilities must lie in (0,1]");
}

InclusionSampling InclusionSampling::uniform(std::size_t n, std::size_t expected_size) {
  if (expected_size == 0 || expected_size > n) throw std::invalid_argument("expected size must be in [1,n]");
  return InclusionSampling(std::vector<double>(n, static_cast<double>(expected_size) / static_cast<double>(n)));
}

double InclusionSampling::expected_size() const { return std::accumulate(q_.begin(), q_.end(), 0.0); }

std::vector<std::size_t> InclusionSampling::draw(RandomSource& rng) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < q_.size(); ++i)
    if (rng.bernoulli(q_[i], Stream::index)) out.push_back(i);
  return out;
}

ImportanceWeights importance_weights(std::span<const double> row_norms_sq, double lambda, double target) {
  const std::size_t n = row_norms_sq.size();
  if (n == 0) throw std::invalid_argument("no rows");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = row_norms_sq[i] + lambda;
    if (!(w[i] > 0.0)) throw std::invalid_argument("row with zero weight");
  }
  auto mass = [&](double shift) {
    double s = 0.0;
    for (double wi : w) s += wi / (shift + wi);
    return s;
  };

  ImportanceWeights out;
  if (mass(0.0) < target) {
    // Cannot reach the target with shift >= 0; renormalize the unshifted terms.
    out.fallback = true;
    out.values.assign(n, target / static_cast<double>(n));
    return out;
  }
  // mass is decreasing in shift; bracket then bisect.
  double lo = 0.0;
  double hi = std::max(1.0, *std::max_element(w.begin(), w.end()));
  while (mass(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > target ? lo : hi) = mid;
  }
  out.shift = 0.5 * (lo + hi);
  out.values.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += out.values[i] = w[i] / (out.shift + w[i]);
  for (double& v : out.values) v *= target / total;
  return out;
}

IndexDistribution importance_probs(std::span<const double> row_norms_sq, double lambda, ProbabilityRule rule) {
  if (rule == ProbabilityRule::uniform) return IndexDistribution::uniform(row_norms_sq.size());
  auto weights = importance_weights(row_norms_sq, lambda, 1.0);
  return IndexDistribution::from_weights(weights.values);
}

InclusionSampling inclusion_probs(std::span<const double> row_norms_sq, double lambda, ProbabilityRule rule,
                                  std::size_t expected_size) {
  if (rule == ProbabilityRule::uniform) return InclusionSampling::uniform(row_norms_sq.size(), expected_size);
  auto weights = importance_weights(row_norms_sq, lambda, static_cast<double>(expected_size));
  for (double& q : weights.values) q = std::min(q, 1.0);
  return InclusionSampling(std::move(weights.values));
}

double expected_smoothness(const Problem& problem, const IndexDistribution& dist) {
  if (dist.size() != problem.n()) throw std::invalid_argument("distribution size mismatch");
  const auto n = static_cast<double>(problem.n());
  double best = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i)
    best = std::max(best, problem.component_smoothness(i) / (n * dist.probability(i)));
  return best;
}

std::vector<double> row_norms_sq(const Problem& problem) {
  const Vector norms = problem.features().rowwise().squaredNorm();
  return {norms.data(), norms.data() + norms.size()};
}

}  // namespace unisgd
