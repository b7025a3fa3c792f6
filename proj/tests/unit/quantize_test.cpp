#include <gtest/gtest.h>

#include "enumerator.hpp"
#include "fixtures.hpp"
#include "unisgd/quantize.hpp"

namespace unisgd {
namespace {

struct Moments {
  Vector mean;
  double error_sq;
  std::size_t paths;
};

Moments enumerate(const Quantizer& q, const Vector& x) {
  testing::Enumerator en;
  Moments m{Vector::Zero(x.size()), 0.0, 0};
  m.paths = en.for_each_path([&](RandomSource& rng) { return q.apply(x, rng); },
                             [&](const Vector& out, double w) {
                               m.mean += w * out;
                               m.error_sq += w * (out - x).squaredNorm();
                             });
  return m;
}

TEST(QuantizerTest, IdentityIsExact) {
  SeededSource rng(1);
  const Vector x = testing::random_vector(5, rng);
  EXPECT_EQ(Quantizer::identity().apply(x, rng), x);
  EXPECT_EQ(Quantizer::identity().omega(5), 0.0);
}

TEST(QuantizerTest, RandKWithFullSupportIsExact) {
  SeededSource rng(2);
  const Vector x = testing::random_vector(4, rng);
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(Quantizer::rand_k(4).apply(x, rng).isApprox(x, 1e-15));
}

TEST(QuantizerTest, RandOneOnTwoCoordinates) {
  Vector x(2);
  x << 1, 1;
  const auto m = enumerate(Quantizer::rand_k(1), x);
  EXPECT_TRUE(m.mean.isApprox(x, 1e-15));
  EXPECT_NEAR(m.error_sq, 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(Quantizer::rand_k(1).omega(2), 1.0);
}

TEST(QuantizerTest, RandKEnumerationMatchesOmegaExactly) {
  SeededSource rng(3);
  for (std::size_t d = 1; d <= 6; ++d) {
    for (std::size_t k = 1; k <= d; ++k) {
      const Vector x = testing::random_vector(d, rng);
      const Quantizer q = Quantizer::rand_k(k);
      const auto m = enumerate(q, x);
      EXPECT_LT((m.mean - x).norm(), 1e-14 * (1 + x.norm())) << d << " " << k;
      EXPECT_NEAR(m.error_sq, q.omega(d) * x.squaredNorm(), 1e-13 * x.squaredNorm()) << d << " " << k;
    }
  }
}

TEST(QuantizerTest, DitheringEnumeratedUnbiasedWithinOmega) {
  SeededSource rng(4);
  for (std::size_t d = 1; d <= 6; ++d) {
    const Vector x = testing::random_vector(d, rng);
    const auto m = enumerate(Quantizer::dithering(), x);
    EXPECT_LT((m.mean - x).norm(), 1e-14 * (1 + x.norm()));
    EXPECT_LE(m.error_sq, Quantizer::dithering().omega(d) * x.squaredNorm());
  }
}

TEST(QuantizerTest, ZeroVectorUnchanged) {
  SeededSource rng(5);
  for (const auto& q : {Quantizer::identity(), Quantizer::rand_k(2), Quantizer::dithering()})
    EXPECT_EQ(q.apply(Vector::Zero(3), rng), Vector::Zero(3));
}

TEST(QuantizerTest, KAboveDimensionRejected) {
  SeededSource rng(6);
  EXPECT_THROW(Quantizer::rand_k(4).apply(Vector::Ones(3), rng), std::invalid_argument);
  EXPECT_THROW(Quantizer::rand_k(0), std::invalid_argument);
}

TEST(CertifyOmega, IdentityIsZero) {
  SeededSource rng(7);
  std::vector<Vector> trials{testing::random_vector(4, rng), testing::random_vector(4, rng)};
  const auto est = certify_omega(Quantizer::identity(), trials, 10000, rng);
  EXPECT_EQ(est.omega_hat, 0.0);
}

TEST(CertifyOmega, RandKWithinThreeStandardErrors) {
  SeededSource rng(8);
  std::vector<Vector> trials{testing::random_vector(6, rng)};
  const auto est = certify_omega(Quantizer::rand_k(2), trials, 100000, rng);
  EXPECT_NEAR(est.omega_hat, 2.0, 3 * est.omega_stderr);
  EXPECT_LT(est.max_bias_in_stderr, 4.5);
}

TEST(CertifyOmega, DitheringBelowBoundAndUnbiased) {
  SeededSource rng(9);
  std::vector<Vector> trials;
  for (int t = 0; t < 3; ++t) trials.push_back(testing::random_vector(5, rng));
  trials.push_back(Vector::Zero(5));  // skipped
  const auto est = certify_omega(Quantizer::dithering(), trials, 100000, rng);
  EXPECT_LE(est.omega_hat, 5.0 + 5 * est.omega_stderr);
  EXPECT_LT(est.max_bias_in_stderr, 4.5);
}

}  // namespace
}  // namespace unisgd
