#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>

namespace unisgd {

class IndexDistribution;

// xoshiro256** with splitmix64 state expansion.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

// Randomness is split into independent streams so that an estimator which
// never flips a coin still sees the same index sequence as one that does.
enum class Stream : std::uint8_t { index = 0, coin = 1, quantizer = 2, noise = 3 };

class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual std::size_t uniform_index(std::size_t n, Stream s) = 0;
  virtual std::size_t sample(const IndexDistribution& dist, Stream s) = 0;
  virtual bool bernoulli(double p, Stream s) = 0;
  virtual double normal(Stream s) = 0;
  virtual double uniform01(Stream s) = 0;

  // Randomness for the j-th sub-estimator of a composite; child(0) is *this.
  virtual RandomSource& child(std::size_t j) = 0;
};

class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed, std::uint64_t salt = 0);

  std::size_t uniform_index(std::size_t n, Stream s) override;
  std::size_t sample(const IndexDistribution& dist, Stream s) override;
  bool bernoulli(double p, Stream s) override;
  double normal(Stream s) override;
  double uniform01(Stream s) override;
  RandomSource& child(std::size_t j) override;

  std::uint64_t seed() const { return seed_; }

 private:
  Xoshiro256& gen(Stream s) { return streams_[static_cast<std::size_t>(s)]; }

  std::uint64_t seed_;
  std::uint64_t salt_;
  std::array<Xoshiro256, 4> streams_;
  std::map<std::size_t, std::unique_ptr<SeededSource>> children_;
};

// Helpers over a raw generator; these fix the bit-to-value conversions so
// traces are reproducible across standard libraries.
double to_unit_interval(std::uint64_t bits);
std::uint64_t bounded(Xoshiro256& g, std::uint64_t n);
double standard_normal(Xoshiro256& g);

}  // namespace unisgd
