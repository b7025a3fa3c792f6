#pragma once

#include <cstdint>

#include "unisgd/data.hpp"
#include "unisgd/problem.hpp"
#include "unisgd/random.hpp"

namespace unisgd::testing {

// Gaussian rows scaled to unit norm, labels all ones unless `consistent`,
// in which case b = A x_true with x_true drawn from the same source.
inline Problem ridge_problem(std::size_t n, std::size_t d, double lambda, std::uint64_t seed,
                             Regularizer reg = Regularizer::none(), bool normalize = true) {
  SeededSource rng(seed);
  auto data = generate_least_squares(SyntheticType::gaussian, n, d, rng);
  RowMatrix a = normalize ? normalize_rows(std::move(data.features)) : std::move(data.features);
  return Problem(Loss::squared, std::move(a), std::move(data.labels), lambda, reg);
}

inline Vector random_vector(std::size_t d, RandomSource& rng, double scale = 1.0) {
  Vector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = scale * rng.normal(Stream::noise);
  return v;
}

// Labels chosen so x_true minimizes every component when lambda = 0.
struct Interpolating {
  Problem problem;
  Vector solution;
};

inline Interpolating interpolating_problem(std::size_t n, std::size_t d, std::uint64_t seed) {
  SeededSource rng(seed);
  auto data = generate_least_squares(SyntheticType::gaussian, n, d, rng);
  RowMatrix a = normalize_rows(std::move(data.features));
  Vector truth = random_vector(d, rng);
  Vector b = a * truth;
  return {Problem(Loss::squared, std::move(a), std::move(b), 0.0), truth};
}

inline Problem logistic_problem(std::size_t n, std::size_t d, double lambda, std::uint64_t seed) {
  SeededSource rng(seed);
  auto data = generate_least_squares(SyntheticType::gaussian, n, d, rng);
  RowMatrix a = normalize_rows(std::move(data.features));
  Vector truth = random_vector(d, rng);
  Vector b = (a * truth).unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
  // Flip a few labels so the data are not separable.
  for (Eigen::Index i = 0; i < b.size(); i += 7) b(i) = -b(i);
  return Problem(Loss::logistic, std::move(a), std::move(b), lambda);
}

}  // namespace unisgd::testing
