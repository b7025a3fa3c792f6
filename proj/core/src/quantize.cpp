#include "unisgd/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace unisgd {

Quantizer Quantizer::rand_k(std::size_t k) {
  if (k == 0) throw std::invalid_argument("rand_k needs k >= 1");
  return Quantizer(Kind::rand_k, k);
}

double Quantizer::omega(std::size_t d) const {
  switch (kind_) {
    case Kind::identity:
      return 0.0;
    case Kind::rand_k:
      if (k_ > d) throw std::invalid_argument("rand_k needs k <= d");
      return static_cast<double>(d) / static_cast<double>(k_) - 1.0;
    case Kind::dithering:
      return static_cast<double>(d);
  }
  return 0.0;
}

std::string Quantizer::describe() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::rand_k:
      return "rand_k(" + std::to_string(k_) + ")";
    case Kind::dithering:
      return "dithering";
  }
  return {};
}

Vector Quantizer::apply(const Vector& x, RandomSource& rng) const {
  const auto d = static_cast<std::size_t>(x.size());
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::rand_k: {
      if (k_ > d) throw std::invalid_argument("rand_k needs k <= d");
      std::vector<std::size_t> perm(d);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Vector out = Vector::Zero(x.size());
      const double scale = static_cast<double>(d) / static_cast<double>(k_);
      for (std::size_t t = 0; t < k_; ++t) {
        const std::size_t pick = t + rng.uniform_index(d - t, Stream::quantizer);
        std::swap(perm[t], perm[pick]);
        const auto j = static_cast<Eigen::Index>(perm[t]);
        out(j) = scale * x(j);
      }
      return out;
    }
    case Kind::dithering: {
      const double norm = x.norm();
      Vector out = Vector::Zero(x.size());
      if (norm == 0.0) return out;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (rng.bernoulli(std::abs(x(j)) / norm, Stream::quantizer)) out(j) = x(j) > 0 ? norm : -norm;
      }
      return out;
    }
  }
  return x;
}

OmegaEstimate certify_omega(const Quantizer& q, std::span<const Vector> trials, std::size_t samples,
                            RandomSource& rng) {
  if (samples < 10000) throw std::invalid_argument("certification needs at least 10000 samples");
  OmegaEstimate est;
  est.omega_hat = -1.0;
  const auto s = static_cast<double>(samples);
  for (const Vector& x : trials) {
    const double base = x.squaredNorm();
    if (base == 0.0) continue;
    Vector mean = Vector::Zero(x.size());
    Vector m2 = Vector::Zero(x.size());
    double ratio_sum = 0.0;
    double ratio_sq = 0.0;
    for (std::size_t t = 0; t < samples; ++t) {
      const Vector y = q.apply(x, rng);
      mean += y;
      m2 += y.cwiseAbs2();
      const double r = y.squaredNorm() / base;
      ratio_sum += r;
      ratio_sq += r * r;
    }
    mean /= s;
    m2 /= s;
    const double ratio = ratio_sum / s;
    const double ratio_var = std::max(ratio_sq / s - ratio * ratio, 0.0);
    if (ratio - 1.0 > est.omega_hat) {
      est.omega_hat = ratio - 1.0;
      est.omega_stderr = std::sqrt(ratio_var / s);
    }
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double var = std::max(m2(j) - mean(j) * mean(j), 0.0);
      const double se = std::sqrt(var / s);
      const double dev = std::abs(mean(j) - x(j));
      if (se > 0.0) est.max_bias_in_stderr = std::max(est.max_bias_in_stderr, dev / se);
      else if (dev > 1e-12 * std::abs(x(j))) est.max_bias_in_stderr = std::numeric_limits<double>::infinity();
    }
  }
  est.omega_hat = std::max(est.omega_hat, 0.0);
  return est;
}

}  // namespace unisgd
