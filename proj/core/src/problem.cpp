#include "unisgd/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace unisgd {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

constexpr std::size_t kGramLimit = 1024;

}  // namespace

Regularizer Regularizer::l2(double weight) {
  if (!(weight >= 0)) throw std::invalid_argument("l2 weight must be non-negative");
  return Regularizer(Kind::l2, weight);
}

Regularizer Regularizer::ball(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  return Regularizer(Kind::ball, radius);
}

Vector Regularizer::prox(double step, const Vector& x) const {
  switch (kind_) {
    case Kind::zero:
      return x;
    case Kind::l2:
      return x / (1.0 + step * param_);
    case Kind::ball: {
      const double norm = x.norm();
      return norm <= param_ ? x : Vector(x * (param_ / norm));
    }
  }
  return x;
}

double Regularizer::value(const Vector& x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::l2:
      return 0.5 * param_ * x.squaredNorm();
    case Kind::ball:
      return x.norm() <= param_ * (1.0 + 1e-12) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::string Regularizer::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero:
      os << "zero";
      break;
    case Kind::l2:
      os << "l2(" << param_ << ")";
      break;
    case Kind::ball:
      os << "ball(" << param_ << ")";
      break;
  }
  return os.str();
}

ComponentEval logistic_component(const Eigen::Ref<const Vector>& a, double b, double lambda,
                                 const Vector& x) {
  const double z = b * a.dot(x);
  return {softplus(z) + 0.5 * lambda * x.squaredNorm(), b * sigmoid(z) * a + lambda * x};
}

ComponentEval least_squares_component(const Eigen::Ref<const Vector>& a, double b, const Vector& x) {
  const double r = a.dot(x) - b;
  return {0.5 * r * r, r * a};
}

Problem::Problem(Loss loss, RowMatrix features, Vector labels, double lambda, Regularizer reg)
    : loss_(loss), features_(std::move(features)), labels_(std::move(labels)), lambda_(lambda), reg_(reg) {
  if (features_.rows() == 0 || features_.cols() == 0) throw std::invalid_argument("empty problem");
  if (labels_.size() != features_.rows()) throw std::invalid_argument("label count mismatch");
  if (!(lambda_ >= 0)) throw std::invalid_argument("lambda must be non-negative");
  if (!features_.allFinite() || !labels_.allFinite()) throw std::invalid_argument("non-finite data");

  const double curvature = loss_ == Loss::logistic ? 0.25 : 1.0;
  component_L_ = curvature * features_.rowwise().squaredNorm();
  component_L_.array() += lambda_;
  max_component_L_ = component_L_.maxCoeff();

  const auto nn = static_cast<double>(n());
  if (d() <= kGramLimit) {
    Eigen::MatrixXd gram = features_.transpose() * features_ / nn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    mean_L_ = curvature * std::max(eig.eigenvalues().maxCoeff(), 0.0) + lambda_;
    mu_ = (loss_ == Loss::squared ? std::max(eig.eigenvalues().minCoeff(), 0.0) : 0.0) + lambda_;
    if (loss_ == Loss::squared) {
      gram_rhs_ = features_.transpose() * labels_ / nn;
      gram_ = std::move(gram);
    }
  } else {
    mean_L_ = curvature * largest_eigenvalue_gram(features_) / nn + lambda_;
    mu_ = lambda_;
  }
}

double Problem::component_value(std::size_t i, const Vector& x) const {
  const auto row = features_.row(static_cast<Eigen::Index>(i));
  const double y = labels_(static_cast<Eigen::Index>(i));
  const double reg = 0.5 * lambda_ * x.squaredNorm();
  if (loss_ == Loss::squared) {
    const double r = row.dot(x) - y;
    return 0.5 * r * r + reg;
  }
  return softplus(y * row.dot(x)) + reg;
}

void Problem::component_gradient(std::size_t i, const Vector& x, Vector& out) const {
  const auto row = features_.row(static_cast<Eigen::Index>(i));
  const double y = labels_(static_cast<Eigen::Index>(i));
  const double dot = row.dot(x);
  const double scale = loss_ == Loss::squared ? dot - y : y * sigmoid(y * dot);
  out.noalias() = scale * row.transpose();
  if (lambda_ != 0.0) out += lambda_ * x;
}

Vector Problem::component_gradient(std::size_t i, const Vector& x) const {
  Vector g(d());
  component_gradient(i, x, g);
  return g;
}

double Problem::value(const Vector& x) const {
  const Vector z = features_ * x;
  double sum = 0.0;
  if (loss_ == Loss::squared) {
    sum = 0.5 * (z - labels_).squaredNorm();
  } else {
    for (Eigen::Index i = 0; i < z.size(); ++i) sum += softplus(labels_(i) * z(i));
  }
  return sum / static_cast<double>(n()) + 0.5 * lambda_ * x.squaredNorm();
}

Vector Problem::gradient(const Vector& x) const {
  Vector g;
  if (gram_ && d() < n()) {
    g = (*gram_) * x - gram_rhs_;
  } else {
    Vector z = features_ * x;
    if (loss_ == Loss::squared) {
      z -= labels_;
    } else {
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = labels_(i) * sigmoid(labels_(i) * z(i));
    }
    g = features_.transpose() * z / static_cast<double>(n());
  }
  if (lambda_ != 0.0) g += lambda_ * x;
  return g;
}

double Problem::partial_derivative(std::size_t j, const Vector& x) const {
  const auto jj = static_cast<Eigen::Index>(j);
  if (gram_) return gram_->row(jj).dot(x) - gram_rhs_(jj) + lambda_ * x(jj);
  return gradient(x)(jj);
}

Vector Problem::block_gradient(std::size_t first, std::size_t last, const Vector& x) const {
  if (first >= last || last > n()) throw std::out_of_range("bad component block");
  Vector g = Vector::Zero(static_cast<Eigen::Index>(d()));
  Vector tmp(static_cast<Eigen::Index>(d()));
  for (std::size_t i = first; i < last; ++i) {
    component_gradient(i, x, tmp);
    g += tmp;
  }
  return g / static_cast<double>(last - first);
}

double Problem::block_smoothness(std::size_t first, std::size_t last) const {
  if (first >= last || last > n()) throw std::out_of_range("bad component block");
  const auto rows = static_cast<Eigen::Index>(last - first);
  const RowMatrix block = features_.middleRows(static_cast<Eigen::Index>(first), rows);
  const double curvature = loss_ == Loss::logistic ? 0.25 : 1.0;
  return curvature * largest_eigenvalue_gram(block) / static_cast<double>(rows) + lambda_;
}

double bregman(const Problem& p, const Vector& x, const Vector& y) {
  return p.value(x) - p.value(y) - p.gradient(y).dot(x - y);
}

void NoisyOracle::component_gradient(std::size_t i, const Vector& x, RandomSource& rng, Vector& out) const {
  problem_->component_gradient(i, x, out);
  add_noise(out, rng);
}

Vector NoisyOracle::block_gradient(std::size_t first, std::size_t last, const Vector& x,
                                   RandomSource& rng) const {
  Vector g = problem_->block_gradient(first, last, x);
  add_noise(g, rng);
  return g;
}

double NoisyOracle::partial_derivative(std::size_t j, const Vector& x, RandomSource& rng) const {
  const double exact = problem_->partial_derivative(j, x);
  if (variance_ == 0.0) return exact;
  return exact + std::sqrt(variance_ / static_cast<double>(problem_->d())) * rng.normal(Stream::noise);
}

void NoisyOracle::add_noise(Vector& g, RandomSource& rng) const {
  if (variance_ == 0.0) return;
  const double scale = std::sqrt(variance_ / static_cast<double>(g.size()));
  for (Eigen::Index j = 0; j < g.size(); ++j) g(j) += scale * rng.normal(Stream::noise);
}

Vector Reference::block_gradient(std::size_t first, std::size_t last) const {
  const auto rows = static_cast<Eigen::Index>(last - first);
  return component_gradients.middleRows(static_cast<Eigen::Index>(first), rows).colwise().mean().transpose();
}

Reference reference_at(const Problem& p, const Vector& x_star) {
  Reference ref;
  ref.x = x_star;
  ref.component_gradients.resize(static_cast<Eigen::Index>(p.n()), static_cast<Eigen::Index>(p.d()));
  Vector g(static_cast<Eigen::Index>(p.d()));
  for (std::size_t i = 0; i < p.n(); ++i) {
    p.component_gradient(i, x_star, g);
    ref.component_gradients.row(static_cast<Eigen::Index>(i)) = g.transpose();
  }
  ref.gradient = ref.component_gradients.colwise().mean().transpose();
  ref.value = p.value(x_star);
  ref.objective = ref.value + p.regularizer().value(x_star);
  return ref;
}

double largest_eigenvalue_gram(const RowMatrix& a, double rel_tol) {
  const Eigen::Index d = a.cols();
  Xoshiro256 gen(0x5EEDULL);
  Vector v(d);
  for (Eigen::Index j = 0; j < d; ++j) v(j) = 1.0 + to_unit_interval(gen());
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vector w = a.transpose() * (a * v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace unisgd
