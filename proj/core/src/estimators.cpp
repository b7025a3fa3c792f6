#include "unisgd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "unisgd/errors.hpp"
#include "unisgd/theory.hpp"

namespace unisgd {

namespace {

constexpr std::pair<Method, const char*> kMethodNames[] = {
    {Method::sgd, "sgd"},
    {Method::sgd_mb, "sgd_mb"},
    {Method::sgd_independent, "sgd_independent"},
    {Method::sgd_star, "sgd_star"},
    {Method::saga, "saga"},
    {Method::n_saga, "n_saga"},
    {Method::sega, "sega"},
    {Method::n_sega, "n_sega"},
    {Method::svrg, "svrg"},
    {Method::l_svrg, "l_svrg"},
    {Method::diana, "diana"},
    {Method::q_sgd_sr, "q_sgd_sr"},
    {Method::vr_diana, "vr_diana"},
    {Method::convex_combination, "convex_combination"},
    {Method::random_switch, "random_switch"},
};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

Method parse_method(const std::string& name) {
  for (const auto& [m, text] : kMethodNames)
    if (name == text) return m;
  throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  for (const auto& [mm, text] : kMethodNames)
    if (mm == m) return text;
  return "unknown";
}

MethodConfig resolve(const MethodConfig& config, const Problem& problem) {
  MethodConfig out = config;
  const std::size_t n = problem.n();
  const std::size_t d = problem.d();
  const std::string tag = to_string(config.method) + ": ";

  if (!out.explicit_probabilities.empty())
    require(out.explicit_probabilities.size() == n, tag + "explicit probabilities must have one entry per component");
  require(out.noise_variance >= 0.0, tag + "noise variance must be non-negative");
  if (out.quantizer.kind() == Quantizer::Kind::rand_k)
    require(out.quantizer.k() >= 1 && out.quantizer.k() <= d, tag + "rand_k needs 1 <= k <= d");
  const double omega = out.quantizer.omega(d);

  switch (out.method) {
    case Method::sgd_mb:
      require(out.minibatch >= 1, tag + "minibatch must be at least 1");
      break;
    case Method::sgd_independent:
      require(out.minibatch >= 1 && out.minibatch <= n, tag + "expected minibatch must lie in [1, n]");
      break;
    case Method::n_saga:
    case Method::n_sega:
      break;
    case Method::svrg:
      if (out.epoch_length == 0) out.epoch_length = n;
      break;
    case Method::l_svrg:
      if (out.refresh_probability == 0.0) out.refresh_probability = 1.0 / static_cast<double>(n);
      require(out.refresh_probability > 0.0 && out.refresh_probability <= 1.0,
              tag + "refresh probability must lie in (0, 1]");
      break;
    case Method::diana:
      require(out.nodes >= 1 && n % out.nodes == 0, tag + "nodes must divide the number of components");
      if (out.alpha == 0.0) out.alpha = 1.0 / (omega + 1.0);
      require(out.alpha > 0.0 && out.alpha <= 1.0, tag + "alpha must lie in (0, 1]");
      break;
    case Method::vr_diana: {
      require(out.nodes >= 1 && n % out.nodes == 0, tag + "nodes must divide the number of components");
      require(out.variant == 1 || out.variant == 2, tag + "variant must be 1 or 2");
      const double limit = vr_diana_alpha_limit(n / out.nodes, omega);
      if (out.alpha == 0.0) out.alpha = limit;
      require(out.alpha > 0.0 && out.alpha <= limit * (1.0 + 1e-12),
              tag + "alpha exceeds min{1/(3m), 1/(omega+1)} = " + std::to_string(limit));
      break;
    }
    case Method::convex_combination:
    case Method::random_switch: {
      require(!out.children.empty(), tag + "needs at least one part");
      require(out.weights.size() == out.children.size(), tag + "needs one weight per part");
      double total = 0.0;
      for (double w : out.weights) {
        require(w >= 0.0, tag + "weights must be non-negative");
        total += w;
      }
      require(std::abs(total - 1.0) <= 1e-12, tag + "weights must sum to one");
      for (auto& child : out.children) child = resolve(child, problem);
      break;
    }
    default:
      break;
  }
  return out;
}

IndexDistribution sampling_distribution(const Problem& problem, const MethodConfig& config) {
  if (!config.explicit_probabilities.empty()) return IndexDistribution(config.explicit_probabilities);
  return importance_probs(row_norms_sq(problem), problem.lambda(), config.probabilities);
}

InclusionSampling inclusion_sampling(const Problem& problem, const MethodConfig& config) {
  if (!config.explicit_probabilities.empty()) return InclusionSampling(config.explicit_probabilities);
  return inclusion_probs(row_norms_sq(problem), problem.lambda(), config.probabilities, config.minibatch);
}

// ---------------------------------------------------------------- plain SGD

SgdEstimator::SgdEstimator(const Problem& problem, IndexDistribution dist)
    : problem_(&problem), dist_(std::move(dist)) {
  if (dist_.size() != problem.n()) throw std::invalid_argument("distribution size mismatch");
}

double SgdEstimator::scale(std::size_t i) const {
  if (dist_.is_uniform()) return 1.0;
  return 1.0 / (static_cast<double>(problem_->n()) * dist_.probability(i));
}

Vector SgdEstimator::next(const Vector& x, RandomSource& rng) {
  const std::size_t i = rng.sample(dist_, Stream::index);
  Vector g = problem_->component_gradient(i, x);
  if (!dist_.is_uniform()) g *= scale(i);
  return g;
}

MinibatchSgd::MinibatchSgd(const Problem& problem, IndexDistribution dist, std::size_t batch)
    : problem_(&problem), dist_(std::move(dist)), batch_(batch) {
  if (batch_ == 0) throw std::invalid_argument("batch must be positive");
  if (dist_.size() != problem.n()) throw std::invalid_argument("distribution size mismatch");
}

Vector MinibatchSgd::next(const Vector& x, RandomSource& rng) {
  const auto n = static_cast<double>(problem_->n());
  Vector g = Vector::Zero(x.size());
  Vector tmp(x.size());
  for (std::size_t t = 0; t < batch_; ++t) {
    const std::size_t i = rng.sample(dist_, Stream::index);
    problem_->component_gradient(i, x, tmp);
    g += tmp / (n * dist_.probability(i));
  }
  return g / static_cast<double>(batch_);
}

IndependentSgd::IndependentSgd(const Problem& problem, InclusionSampling sampling)
    : problem_(&problem), sampling_(std::move(sampling)) {
  if (sampling_.size() != problem.n()) throw std::invalid_argument("sampling size mismatch");
}

Vector IndependentSgd::next(const Vector& x, RandomSource& rng) {
  const auto n = static_cast<double>(problem_->n());
  Vector g = Vector::Zero(x.size());
  Vector tmp(x.size());
  for (std::size_t i : sampling_.draw(rng)) {
    problem_->component_gradient(i, x, tmp);
    g += tmp / (n * sampling_.inclusion(i));
  }
  return g;
}

SgdStar::SgdStar(const Problem& problem, IndexDistribution dist, const Reference& ref)
    : problem_(&problem), dist_(std::move(dist)), star_(ref.component_gradients), star_mean_(ref.gradient) {
  if (dist_.size() != problem.n()) throw std::invalid_argument("distribution size mismatch");
  if (star_.rows() != idx(problem.n())) throw std::invalid_argument("reference size mismatch");
}

Vector SgdStar::next(const Vector& x, RandomSource& rng) {
  const std::size_t i = rng.sample(dist_, Stream::index);
  Vector g = problem_->component_gradient(i, x);
  if (dist_.is_uniform()) {
    g -= star_.row(idx(i)).transpose();
  } else {
    const double s = 1.0 / (static_cast<double>(problem_->n()) * dist_.probability(i));
    g *= s;
    g -= s * star_.row(idx(i)).transpose();
  }
  g += star_mean_;
  return g;
}

// ---------------------------------------------------------------- SAGA

Saga::Saga(const Problem& problem, double noise_variance) : problem_(&problem), noise_(problem, noise_variance) {}

void Saga::initialize(const Vector& x, RandomSource& rng) {
  if (ready_) return;
  Vector fresh(x.size());
  table_.resize(idx(problem_->n()), x.size());
  for (std::size_t i = 0; i < problem_->n(); ++i) {
    noise_.component_gradient(i, x, rng, fresh);
    table_.row(idx(i)) = fresh.transpose();
  }
  mean_ = table_.colwise().mean().transpose();
  ready_ = true;
}

Vector Saga::next(const Vector& x, RandomSource& rng) {
  const std::size_t n = problem_->n();
  initialize(x, rng);
  Vector fresh(x.size());
  const std::size_t j = rng.uniform_index(n, Stream::index);
  noise_.component_gradient(j, x, rng, fresh);
  Vector delta = fresh - table_.row(idx(j)).transpose();
  Vector g = delta + mean_;
  table_.row(idx(j)) = fresh.transpose();
  // Periodic exact recomputation keeps the running mean from drifting.
  if (++steps_ % n == 0) {
    mean_ = table_.colwise().mean().transpose();
  } else {
    mean_ += delta / static_cast<double>(n);
  }
  return g;
}

double Saga::sigma_sq(const Reference& ref) const {
  if (!ready_) return 0.0;
  return (table_ - ref.component_gradients).rowwise().squaredNorm().mean();
}

// ---------------------------------------------------------------- SEGA

Sega::Sega(const Problem& problem, double noise_variance)
    : problem_(&problem), noise_(problem, noise_variance), h_(Vector::Zero(idx(problem.d()))) {}

Vector Sega::next(const Vector& x, RandomSource& rng) {
  const std::size_t d = problem_->d();
  const std::size_t i = rng.uniform_index(d, Stream::index);
  const double partial = noise_.partial_derivative(i, x, rng);
  Vector g = h_;
  g(idx(i)) += static_cast<double>(d) * (partial - h_(idx(i)));
  h_(idx(i)) = partial;
  return g;
}

double Sega::sigma_sq(const Reference& ref) const { return (h_ - ref.gradient).squaredNorm(); }

// ---------------------------------------------------------------- SVRG

Svrg::Svrg(const Problem& problem, std::size_t epoch_length) : problem_(&problem), epoch_(epoch_length) {
  if (epoch_ == 0) throw std::invalid_argument("epoch length must be positive");
}

void Svrg::prepare(Vector& x) {
  if (!ready_) return;
  // The anchor is the mean of the m points gradients were taken at.
  if (in_epoch_ == epoch_) {
    anchor_ = running_sum_ / static_cast<double>(epoch_);
    anchor_grad_ = problem_->gradient(anchor_);
    x = anchor_;
    running_sum_.setZero();
    in_epoch_ = 0;
  }
  running_sum_ += x;
}

void Svrg::initialize(const Vector& x, RandomSource& /*rng*/) {
  if (ready_) return;
  anchor_ = x;
  anchor_grad_ = problem_->gradient(x);
  running_sum_ = Vector::Zero(x.size());
  ready_ = true;
}

Vector Svrg::next(const Vector& x, RandomSource& rng) {
  initialize(x, rng);
  const std::size_t i = rng.uniform_index(problem_->n(), Stream::index);
  ++in_epoch_;
  return problem_->component_gradient(i, x) - problem_->component_gradient(i, anchor_) + anchor_grad_;
}

double Svrg::sigma_sq(const Reference& ref) const {
  if (!ready_) return 0.0;
  double sum = 0.0;
  Vector g(anchor_.size());
  for (std::size_t i = 0; i < problem_->n(); ++i) {
    problem_->component_gradient(i, anchor_, g);
    sum += (g - ref.component_gradients.row(idx(i)).transpose()).squaredNorm();
  }
  return sum / static_cast<double>(problem_->n());
}

LooplessSvrg::LooplessSvrg(const Problem& problem, double refresh_probability)
    : problem_(&problem), p_(refresh_probability) {
  if (!(p_ > 0.0 && p_ <= 1.0)) throw std::invalid_argument("refresh probability must lie in (0,1]");
}

void LooplessSvrg::initialize(const Vector& x, RandomSource& /*rng*/) {
  if (ready_) return;
  anchor_ = x;
  anchor_grad_ = problem_->gradient(x);
  ready_ = true;
}

Vector LooplessSvrg::next(const Vector& x, RandomSource& rng) {
  initialize(x, rng);
  const std::size_t i = rng.uniform_index(problem_->n(), Stream::index);
  Vector g = problem_->component_gradient(i, x) - problem_->component_gradient(i, anchor_) + anchor_grad_;
  if (rng.bernoulli(p_, Stream::coin)) {
    anchor_ = x;
    anchor_grad_ = problem_->gradient(x);
  }
  return g;
}

double LooplessSvrg::sigma_sq(const Reference& ref) const {
  if (!ready_) return 0.0;
  double sum = 0.0;
  Vector g(anchor_.size());
  for (std::size_t i = 0; i < problem_->n(); ++i) {
    problem_->component_gradient(i, anchor_, g);
    sum += (g - ref.component_gradients.row(idx(i)).transpose()).squaredNorm();
  }
  return sum / static_cast<double>(problem_->n());
}

// ---------------------------------------------------------------- DIANA

Diana::Diana(const Problem& problem, std::size_t nodes, Quantizer q, double alpha, double noise_variance)
    : problem_(&problem),
      noise_(problem, noise_variance),
      nodes_(nodes),
      block_(nodes ? problem.n() / nodes : 0),
      q_(q),
      alpha_(alpha),
      h_(RowMatrix::Zero(idx(nodes), idx(problem.d()))) {
  if (nodes_ == 0 || problem.n() % nodes_ != 0) throw std::invalid_argument("nodes must divide n");
}

Vector Diana::next(const Vector& x, RandomSource& rng) {
  Vector g = Vector::Zero(x.size());
  for (std::size_t node = 0; node < nodes_; ++node) {
    const Vector local = noise_.block_gradient(node * block_, (node + 1) * block_, x, rng);
    const Vector shift = h_.row(idx(node)).transpose();
    const Vector compressed = q_.apply(local - shift, rng);
    g += shift + compressed;
    h_.row(idx(node)) += alpha_ * compressed.transpose();
  }
  return g / static_cast<double>(nodes_);
}

double Diana::sigma_sq(const Reference& ref) const {
  double sum = 0.0;
  for (std::size_t node = 0; node < nodes_; ++node)
    sum += (h_.row(idx(node)).transpose() - ref.block_gradient(node * block_, (node + 1) * block_)).squaredNorm();
  return sum / static_cast<double>(nodes_);
}

QuantizedSgd::QuantizedSgd(const Problem& problem, IndexDistribution dist, Quantizer q)
    : problem_(&problem), dist_(std::move(dist)), q_(q) {
  if (dist_.size() != problem.n()) throw std::invalid_argument("distribution size mismatch");
}

Vector QuantizedSgd::next(const Vector& x, RandomSource& rng) {
  const std::size_t i = rng.sample(dist_, Stream::index);
  Vector g = problem_->component_gradient(i, x);
  if (!dist_.is_uniform()) g *= 1.0 / (static_cast<double>(problem_->n()) * dist_.probability(i));
  return q_.apply(g, rng);
}

// ---------------------------------------------------------------- VR-DIANA

VrDiana::VrDiana(const Problem& problem, std::size_t nodes, Quantizer q, double alpha, int variant)
    : problem_(&problem),
      nodes_(nodes),
      block_(nodes ? problem.n() / nodes : 0),
      q_(q),
      alpha_(alpha),
      variant_(variant),
      h_(RowMatrix::Zero(idx(nodes), idx(problem.d()))) {
  if (nodes_ == 0 || problem.n() % nodes_ != 0) throw std::invalid_argument("nodes must divide n");
  if (variant_ != 1 && variant_ != 2) throw std::invalid_argument("variant must be 1 or 2");
  const double limit = vr_diana_alpha_limit(block_, q_.omega(problem.d()));
  if (!(alpha_ > 0.0 && alpha_ <= limit * (1.0 + 1e-12)))
    throw std::invalid_argument("alpha exceeds min{1/(3m), 1/(omega+1)}");
}

void VrDiana::refresh_all(const Vector& x) {
  Vector g(x.size());
  for (std::size_t i = 0; i < problem_->n(); ++i) {
    problem_->component_gradient(i, x, g);
    table_.row(idx(i)) = g.transpose();
  }
  node_mean_ = recomputed_node_means();
}

RowMatrix VrDiana::recomputed_node_means() const {
  RowMatrix means(idx(nodes_), table_.cols());
  for (std::size_t node = 0; node < nodes_; ++node)
    means.row(idx(node)) = table_.middleRows(idx(node * block_), idx(block_)).colwise().mean();
  return means;
}

void VrDiana::initialize(const Vector& x, RandomSource& /*rng*/) {
  if (ready_) return;
  table_.resize(idx(problem_->n()), x.size());
  refresh_all(x);
  ready_ = true;
}

Vector VrDiana::next(const Vector& x, RandomSource& rng) {
  initialize(x, rng);
  const bool refresh = variant_ == 1 && rng.bernoulli(1.0 / static_cast<double>(block_), Stream::coin);
  Vector g = Vector::Zero(x.size());
  Vector fresh(x.size());
  for (std::size_t node = 0; node < nodes_; ++node) {
    const std::size_t comp = node * block_ + rng.uniform_index(block_, Stream::index);
    problem_->component_gradient(comp, x, fresh);
    const Vector local = fresh - table_.row(idx(comp)).transpose() + node_mean_.row(idx(node)).transpose();
    const Vector shift = h_.row(idx(node)).transpose();
    const Vector compressed = q_.apply(local - shift, rng);
    g += shift + compressed;
    h_.row(idx(node)) += alpha_ * compressed.transpose();
    if (variant_ == 2) {
      node_mean_.row(idx(node)) += (fresh.transpose() - table_.row(idx(comp))) / static_cast<double>(block_);
      table_.row(idx(comp)) = fresh.transpose();
    }
  }
  if (refresh) refresh_all(x);
  return g / static_cast<double>(nodes_);
}

double VrDiana::sigma_sq(const Reference& ref) const {
  if (!ready_) return 0.0;
  const auto n = static_cast<double>(nodes_);
  const auto m = static_cast<double>(block_);
  double shifts = 0.0;
  for (std::size_t node = 0; node < nodes_; ++node)
    shifts += (h_.row(idx(node)).transpose() - ref.block_gradient(node * block_, (node + 1) * block_)).squaredNorm();
  const double memory = (table_ - ref.component_gradients).rowwise().squaredNorm().sum();
  return shifts / n + memory / (n * m);
}

// ---------------------------------------------------------------- composites

namespace {

std::vector<std::unique_ptr<Estimator>> clone_all(const std::vector<std::unique_ptr<Estimator>>& parts) {
  std::vector<std::unique_ptr<Estimator>> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(p->clone());
  return out;
}

}  // namespace

ConvexCombination::ConvexCombination(std::vector<std::unique_ptr<Estimator>> parts, std::vector<double> weights,
                                     std::vector<double> sigma_coefficients)
    : parts_(std::move(parts)), weights_(std::move(weights)), sigma_coef_(std::move(sigma_coefficients)) {
  if (parts_.empty() || parts_.size() != weights_.size() || parts_.size() != sigma_coef_.size())
    throw std::invalid_argument("combination needs one weight per part");
}

ConvexCombination::ConvexCombination(const ConvexCombination& other)
    : Estimator(other), parts_(clone_all(other.parts_)), weights_(other.weights_), sigma_coef_(other.sigma_coef_) {}

Vector ConvexCombination::next(const Vector& x, RandomSource& rng) {
  Vector g = Vector::Zero(x.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const Vector part = parts_[j]->next(x, rng.child(j));
    if (weights_[j] == 1.0) g += part;
    else if (weights_[j] != 0.0) g += weights_[j] * part;
  }
  return g;
}

void ConvexCombination::initialize(const Vector& x, RandomSource& rng) {
  for (std::size_t j = 0; j < parts_.size(); ++j) parts_[j]->initialize(x, rng.child(j));
}

void ConvexCombination::prepare(Vector& x) {
  for (auto& p : parts_) p->prepare(x);
}

double ConvexCombination::sigma_sq(const Reference& ref) const {
  double s = 0.0;
  for (std::size_t j = 0; j < parts_.size(); ++j)
    if (sigma_coef_[j] != 0.0) s += sigma_coef_[j] * parts_[j]->sigma_sq(ref);
  return s;
}

RandomSwitch::RandomSwitch(std::vector<std::unique_ptr<Estimator>> parts, std::vector<double> weights,
                           std::vector<double> sigma_coefficients)
    : parts_(std::move(parts)), weights_(std::move(weights)), sigma_coef_(std::move(sigma_coefficients)) {
  if (parts_.empty() || parts_.size() != weights_.size() || parts_.size() != sigma_coef_.size())
    throw std::invalid_argument("switch needs one weight per part");
  std::vector<double> positive;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (weights_[j] > 0.0) {
      active_.push_back(j);
      positive.push_back(weights_[j]);
    }
  }
  choice_ = IndexDistribution::from_weights(positive);
}

RandomSwitch::RandomSwitch(const RandomSwitch& other)
    : Estimator(other),
      parts_(clone_all(other.parts_)),
      weights_(other.weights_),
      active_(other.active_),
      choice_(other.choice_),
      sigma_coef_(other.sigma_coef_) {}

void RandomSwitch::initialize(const Vector& x, RandomSource& rng) {
  for (std::size_t j = 0; j < parts_.size(); ++j) parts_[j]->initialize(x, rng.child(j));
}

Vector RandomSwitch::next(const Vector& x, RandomSource& rng) {
  std::size_t pick = 0;
  if (parts_.size() > 1) {
    pick = active_[rng.child(parts_.size()).sample(*choice_, Stream::coin)];
  }
  return parts_[pick]->next(x, rng.child(pick));
}

double RandomSwitch::sigma_sq(const Reference& ref) const {
  double s = 0.0;
  for (std::size_t j = 0; j < parts_.size(); ++j)
    if (sigma_coef_[j] != 0.0) s += sigma_coef_[j] * parts_[j]->sigma_sq(ref);
  return s;
}

// ---------------------------------------------------------------- factory

std::unique_ptr<Estimator> make_estimator(const Problem& problem, const MethodConfig& config, const Reference* ref) {
  const MethodConfig c = resolve(config, problem);
  switch (c.method) {
    case Method::sgd:
      return std::make_unique<SgdEstimator>(problem, sampling_distribution(problem, c));
    case Method::sgd_mb:
      return std::make_unique<MinibatchSgd>(problem, sampling_distribution(problem, c), c.minibatch);
    case Method::sgd_independent:
      return std::make_unique<IndependentSgd>(problem, inclusion_sampling(problem, c));
    case Method::sgd_star:
      if (!ref) throw ConfigError("sgd_star needs the reference solution");
      return std::make_unique<SgdStar>(problem, sampling_distribution(problem, c), *ref);
    case Method::saga:
      return std::make_unique<Saga>(problem, 0.0);
    case Method::n_saga:
      return std::make_unique<Saga>(problem, c.noise_variance);
    case Method::sega:
      return std::make_unique<Sega>(problem, 0.0);
    case Method::n_sega:
      return std::make_unique<Sega>(problem, c.noise_variance);
    case Method::svrg:
      return std::make_unique<Svrg>(problem, c.epoch_length);
    case Method::l_svrg:
      return std::make_unique<LooplessSvrg>(problem, c.refresh_probability);
    case Method::diana:
      return std::make_unique<Diana>(problem, c.nodes, c.quantizer, c.alpha, c.noise_variance);
    case Method::q_sgd_sr:
      return std::make_unique<QuantizedSgd>(problem, sampling_distribution(problem, c), c.quantizer);
    case Method::vr_diana:
      return std::make_unique<VrDiana>(problem, c.nodes, c.quantizer, c.alpha, c.variant);
    case Method::convex_combination:
    case Method::random_switch: {
      std::vector<std::unique_ptr<Estimator>> parts;
      std::vector<ParamSet> params;
      for (const auto& child : c.children) {
        parts.push_back(make_estimator(problem, child, ref));
        params.push_back(method_params(child, problem, nullptr));
      }
      auto coef = composite_sigma_coefficients(params, c.weights, c.method, c.independent);
      if (c.method == Method::convex_combination)
        return std::make_unique<ConvexCombination>(std::move(parts), c.weights, std::move(coef));
      return std::make_unique<RandomSwitch>(std::move(parts), c.weights, std::move(coef));
    }
  }
  throw ConfigError("unsupported method");
}

}  // namespace unisgd
