#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>

#include "unisgd/random.hpp"

namespace unisgd {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Regularizer {
 public:
  enum class Kind { zero, l2, ball };

  static Regularizer none() { return Regularizer(Kind::zero, 0.0); }
  static Regularizer l2(double weight);
  static Regularizer ball(double radius);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  Vector prox(double step, const Vector& x) const;
  double value(const Vector& x) const;  // +inf outside the ball
  std::string describe() const;

 private:
  Regularizer(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

enum class Loss { squared, logistic };

struct ComponentEval {
  double value;
  Vector gradient;
};

// log(1 + exp(b a^T x)) + lambda/2 |x|^2
ComponentEval logistic_component(const Eigen::Ref<const Vector>& a, double b, double lambda,
                                 const Vector& x);
// 1/2 (a^T x - b)^2
ComponentEval least_squares_component(const Eigen::Ref<const Vector>& a, double b,
                                      const Vector& x);

// f(x) = 1/n sum_i f_i(x), with f_i = loss(a_i, b_i) + lambda/2 |x|^2, plus a
// separate proximable R.
class Problem {
 public:
  Problem(Loss loss, RowMatrix features, Vector labels, double lambda = 0.0,
          Regularizer reg = Regularizer::none());

  std::size_t n() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(features_.cols()); }
  Loss loss() const { return loss_; }
  double lambda() const { return lambda_; }
  const Regularizer& regularizer() const { return reg_; }
  const RowMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }

  double component_value(std::size_t i, const Vector& x) const;
  void component_gradient(std::size_t i, const Vector& x, Vector& out) const;
  Vector component_gradient(std::size_t i, const Vector& x) const;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  double partial_derivative(std::size_t j, const Vector& x) const;
  double objective(const Vector& x) const { return value(x) + reg_.value(x); }

  // Gradient of the average over components [first, last).
  Vector block_gradient(std::size_t first, std::size_t last, const Vector& x) const;

  double component_smoothness(std::size_t i) const { return component_L_(static_cast<Eigen::Index>(i)); }
  const Vector& component_smoothness() const { return component_L_; }
  double smoothness() const { return max_component_L_; }  // max_i L_i
  double mean_smoothness() const { return mean_L_; }       // smoothness of f itself
  double block_smoothness(std::size_t first, std::size_t last) const;
  double strong_convexity() const { return mu_; }

 private:
  Loss loss_;
  RowMatrix features_;
  Vector labels_;
  double lambda_;
  Regularizer reg_;
  Vector component_L_;
  double max_component_L_ = 0.0;
  double mean_L_ = 0.0;
  double mu_ = 0.0;
  // Cached Gram data for squared loss: H = A^T A / n, c = A^T b / n.
  std::optional<Eigen::MatrixXd> gram_;
  Vector gram_rhs_;
};

// D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>
double bregman(const Problem& p, const Vector& x, const Vector& y);

// Gradient oracle with additive Gaussian noise of total variance sigma_sq.
class NoisyOracle {
 public:
  NoisyOracle(const Problem& problem, double variance) : problem_(&problem), variance_(variance) {}

  double variance() const { return variance_; }
  void component_gradient(std::size_t i, const Vector& x, RandomSource& rng, Vector& out) const;
  Vector block_gradient(std::size_t first, std::size_t last, const Vector& x, RandomSource& rng) const;
  // Each partial derivative carries variance sigma_sq / d.
  double partial_derivative(std::size_t j, const Vector& x, RandomSource& rng) const;
  void add_noise(Vector& g, RandomSource& rng) const;

 private:
  const Problem* problem_;
  double variance_;
};

// Quantities at the minimizer used by diagnostics and by sgd_star.
struct Reference {
  Vector x;
  RowMatrix component_gradients;  // row i = grad f_i(x*)
  Vector gradient;                // grad f(x*)
  double value = 0.0;             // f(x*)
  double objective = 0.0;         // f(x*) + R(x*)
  std::size_t iterations = 0;

  Vector block_gradient(std::size_t first, std::size_t last) const;
};

// Exact reference for problems with a known minimizer; gradients evaluated there.
Reference reference_at(const Problem& p, const Vector& x_star);

double largest_eigenvalue_gram(const RowMatrix& a, double rel_tol = 1e-10);

}  // namespace unisgd
