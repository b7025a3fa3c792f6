#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unisgd/method.hpp"
#include "unisgd/problem.hpp"
#include "unisgd/quantize.hpp"
#include "unisgd/random.hpp"
#include "unisgd/sampling.hpp"

namespace unisgd {

// Stateful stochastic gradient. The first call to next() initializes any
// internal memory at the point it is given. Estimators keep a reference to
// the problem, which must outlive them.
class Estimator {
 public:
  virtual ~Estimator() = default;

  virtual Vector next(const Vector& x, RandomSource& rng) = 0;
  // Sets up gradient memory at x; next() does this lazily when needed.
  virtual void initialize(const Vector& /*x*/, RandomSource& /*rng*/) {}
  // Called by the driver before each step; may move the iterate.
  virtual void prepare(Vector& /*x*/) {}
  // The method's sigma_k^2 in the current state.
  virtual double sigma_sq(const Reference& /*ref*/) const { return 0.0; }
  virtual std::unique_ptr<Estimator> clone() const = 0;
  virtual std::string name() const = 0;
};

template <class Derived>
class EstimatorBase : public Estimator {
 public:
  std::unique_ptr<Estimator> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
};

class SgdEstimator : public EstimatorBase<SgdEstimator> {
 public:
  SgdEstimator(const Problem& problem, IndexDistribution dist);
  Vector next(const Vector& x, RandomSource& rng) override;
  std::string name() const override { return "sgd"; }

 protected:
  double scale(std::size_t i) const;
  const Problem* problem_;
  IndexDistribution dist_;
};

class MinibatchSgd : public EstimatorBase<MinibatchSgd> {
 public:
  MinibatchSgd(const Problem& problem, IndexDistribution dist, std::size_t batch);
  Vector next(const Vector& x, RandomSource& rng) override;
  std::string name() const override { return "sgd_mb"; }

 private:
  const Problem* problem_;
  IndexDistribution dist_;
  std::size_t batch_;
};

class IndependentSgd : public EstimatorBase<IndependentSgd> {
 public:
  IndependentSgd(const Problem& problem, InclusionSampling sampling);
  Vector next(const Vector& x, RandomSource& rng) override;
  std::string name() const override { return "sgd_independent"; }

 private:
  const Problem* problem_;
  InclusionSampling sampling_;
};

class SgdStar : public EstimatorBase<SgdStar> {
 public:
  SgdStar(const Problem& problem, IndexDistribution dist, const Reference& ref);
  Vector next(const Vector& x, RandomSource& rng) override;
  std::string name() const override { return "sgd_star"; }

 private:
  const Problem* problem_;
  IndexDistribution dist_;
  RowMatrix star_;
  Vector star_mean_;
};

// SAGA; with noise_variance > 0 the table holds noisy gradients.
class Saga : public EstimatorBase<Saga> {
 public:
  Saga(const Problem& problem, double noise_variance = 0.0);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return noise_.variance() > 0 ? "n_saga" : "saga"; }

  const RowMatrix& table() const { return table_; }
  const Vector& table_mean() const { return mean_; }

 private:
  const Problem* problem_;
  NoisyOracle noise_;
  RowMatrix table_;
  Vector mean_;
  std::size_t steps_ = 0;
  bool ready_ = false;
};

class Sega : public EstimatorBase<Sega> {
 public:
  Sega(const Problem& problem, double noise_variance = 0.0);
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return noise_.variance() > 0 ? "n_sega" : "sega"; }
  const Vector& memory() const { return h_; }

 private:
  const Problem* problem_;
  NoisyOracle noise_;
  Vector h_;
};

// Loop SVRG with epoch length m; the anchor and the iterate are reset to the
// average of the epoch's iterates.
class Svrg : public EstimatorBase<Svrg> {
 public:
  Svrg(const Problem& problem, std::size_t epoch_length);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  void prepare(Vector& x) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return "svrg"; }
  const Vector& anchor() const { return anchor_; }

 private:
  const Problem* problem_;
  std::size_t epoch_;
  Vector anchor_;
  Vector anchor_grad_;
  Vector running_sum_;
  std::size_t in_epoch_ = 0;
  bool ready_ = false;
};

class LooplessSvrg : public EstimatorBase<LooplessSvrg> {
 public:
  LooplessSvrg(const Problem& problem, double refresh_probability);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return "l_svrg"; }
  const Vector& anchor() const { return anchor_; }

 private:
  const Problem* problem_;
  double p_;
  Vector anchor_;
  Vector anchor_grad_;
  bool ready_ = false;
};

// Nodes own contiguous, equally sized blocks of components.
class Diana : public EstimatorBase<Diana> {
 public:
  Diana(const Problem& problem, std::size_t nodes, Quantizer q, double alpha, double noise_variance = 0.0);
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return "diana"; }
  const RowMatrix& shifts() const { return h_; }

 private:
  const Problem* problem_;
  NoisyOracle noise_;
  std::size_t nodes_;
  std::size_t block_;
  Quantizer q_;
  double alpha_;
  RowMatrix h_;
};

class QuantizedSgd : public EstimatorBase<QuantizedSgd> {
 public:
  QuantizedSgd(const Problem& problem, IndexDistribution dist, Quantizer q);
  Vector next(const Vector& x, RandomSource& rng) override;
  std::string name() const override { return "q_sgd_sr"; }

 private:
  const Problem* problem_;
  IndexDistribution dist_;
  Quantizer q_;
};

// Variant 1 refreshes every reference point with a shared coin of bias 1/m;
// variant 2 refreshes only the sampled component.
class VrDiana : public EstimatorBase<VrDiana> {
 public:
  VrDiana(const Problem& problem, std::size_t nodes, Quantizer q, double alpha, int variant);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::string name() const override { return "vr_diana"; }

  const RowMatrix& node_means() const { return node_mean_; }
  RowMatrix recomputed_node_means() const;

 private:
  void refresh_all(const Vector& x);
  const Problem* problem_;
  std::size_t nodes_;
  std::size_t block_;
  Quantizer q_;
  double alpha_;
  int variant_;
  RowMatrix table_;      // grad f_ij(w_ij), one row per component
  RowMatrix node_mean_;  // per node mean of its table rows
  RowMatrix h_;
  bool ready_ = false;
};

// g = sum_j tau_j g_j; child j draws from rng.child(j).
class ConvexCombination : public Estimator {
 public:
  ConvexCombination(std::vector<std::unique_ptr<Estimator>> parts, std::vector<double> weights,
                    std::vector<double> sigma_coefficients);
  ConvexCombination(const ConvexCombination& other);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  void prepare(Vector& x) override;
  double sigma_sq(const Reference& ref) const override;
  std::unique_ptr<Estimator> clone() const override { return std::make_unique<ConvexCombination>(*this); }
  std::string name() const override { return "convex_combination"; }

 private:
  std::vector<std::unique_ptr<Estimator>> parts_;
  std::vector<double> weights_;
  std::vector<double> sigma_coef_;
};

// Picks g_j with probability tau_j; the choice uses rng.child(m).
class RandomSwitch : public Estimator {
 public:
  RandomSwitch(std::vector<std::unique_ptr<Estimator>> parts, std::vector<double> weights,
               std::vector<double> sigma_coefficients);
  RandomSwitch(const RandomSwitch& other);
  void initialize(const Vector& x, RandomSource& rng) override;
  Vector next(const Vector& x, RandomSource& rng) override;
  double sigma_sq(const Reference& ref) const override;
  std::unique_ptr<Estimator> clone() const override { return std::make_unique<RandomSwitch>(*this); }
  std::string name() const override { return "random_switch"; }

 private:
  std::vector<std::unique_ptr<Estimator>> parts_;
  std::vector<double> weights_;
  std::vector<std::size_t> active_;  // parts with positive weight
  std::optional<IndexDistribution> choice_;
  std::vector<double> sigma_coef_;
};

// Builds an estimator; `ref` is required for sgd_star and for sigma
// coefficients of composites only when requested by diagnostics.
std::unique_ptr<Estimator> make_estimator(const Problem& problem, const MethodConfig& config,
                                          const Reference* ref = nullptr);

}  // namespace unisgd
