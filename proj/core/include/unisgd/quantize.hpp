#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "unisgd/problem.hpp"
#include "unisgd/random.hpp"

namespace unisgd {

// Unbiased compression with E Q(x) = x and E|Q(x)|^2 <= (1 + omega)|x|^2.
class Quantizer {
 public:
  enum class Kind { identity, rand_k, dithering };

  static Quantizer identity() { return Quantizer(Kind::identity, 0); }
  static Quantizer rand_k(std::size_t k);
  static Quantizer dithering() { return Quantizer(Kind::dithering, 0); }

  Kind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  double omega(std::size_t d) const;
  std::string describe() const;

  Vector apply(const Vector& x, RandomSource& rng) const;

 private:
  Quantizer(Kind kind, std::size_t k) : kind_(kind), k_(k) {}
  Kind kind_;
  std::size_t k_;
};

struct OmegaEstimate {
  double omega_hat = 0.0;         // max over trials of (E|Q(x)|^2 / |x|^2 - 1)
  double omega_stderr = 0.0;      // standard error of that maximizing trial
  double max_bias_in_stderr = 0.0;  // largest |mean - x_j| in units of its standard error
};

OmegaEstimate certify_omega(const Quantizer& q, std::span<const Vector> trials, std::size_t samples,
                            RandomSource& rng);

}  // namespace unisgd
