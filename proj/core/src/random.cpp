#include "unisgd/random.hpp"

#include <cmath>
#include <stdexcept>

#include "unisgd/sampling.hpp"

namespace unisgd {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base ^ (salt * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
  splitmix64(s);
  return splitmix64(s);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

Xoshiro256::result_type Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double to_unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Lemire's multiply-shift with rejection.
std::uint64_t bounded(Xoshiro256& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bounded: empty range");
  u128 m = static_cast<u128>(g()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(g()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Marsaglia polar; the second variate is discarded so no hidden state exists.
double standard_normal(Xoshiro256& g) {
  for (;;) {
    const double u = 2.0 * to_unit_interval(g()) - 1.0;
    const double v = 2.0 * to_unit_interval(g()) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t salt)
    : seed_(seed),
      salt_(salt),
      streams_{Xoshiro256(derive_seed(derive_seed(seed, salt), 0)),
               Xoshiro256(derive_seed(derive_seed(seed, salt), 1)),
               Xoshiro256(derive_seed(derive_seed(seed, salt), 2)),
               Xoshiro256(derive_seed(derive_seed(seed, salt), 3))} {}

std::size_t SeededSource::uniform_index(std::size_t n, Stream s) { return bounded(gen(s), n); }

std::size_t SeededSource::sample(const IndexDistribution& dist, Stream s) {
  return dist.index_for(to_unit_interval(gen(s)()));
}

bool SeededSource::bernoulli(double p, Stream s) { return to_unit_interval(gen(s)()) < p; }

double SeededSource::normal(Stream s) { return standard_normal(gen(s)); }

double SeededSource::uniform01(Stream s) { return to_unit_interval(gen(s)()); }

RandomSource& SeededSource::child(std::size_t j) {
  if (j == 0) return *this;
  auto& slot = children_[j];
  if (!slot) slot = std::make_unique<SeededSource>(seed_, derive_seed(salt_ + 1, j));
  return *slot;
}

}  // namespace unisgd
