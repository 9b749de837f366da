// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "newsblend/numerics.hpp"

using namespace newsblend;

namespace {

// Reference xoshiro256** seeded through splitmix64, written out longhand.
struct RefXoshiro {
  std::array<std::uint64_t, 4> s{};
  explicit RefXoshiro(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& v : s) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      v = z ^ (z >> 31);
    }
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t r = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return r;
  }
};

}  // namespace

TEST(Matrix, ShapeAndAccess) {
  Matrix m(2, 3, 1.5);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.size(), 6u);
  m(1, 2) = 4.0;
  EXPECT_DOUBLE_EQ(m.row(1)[2], 4.0);
  EXPECT_EQ(m.shape_string(), "2x3");
  EXPECT_TRUE(Matrix().empty());
}

TEST(Matrix, DataSizeMismatchThrows) {
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), ShapeError);
}

TEST(Matrix, MatmulMatchesHandComputedProduct) {
  const auto a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  const auto b = Matrix::from_rows({{7, 8}, {9, 10}, {11, 12}});
  const auto c = matmul(a, b);
  EXPECT_EQ(c, Matrix::from_rows({{58, 64}, {139, 154}}));
  EXPECT_EQ(matmul(a, Matrix::identity(3)), a);
  EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Matrix, MatvecAndTransposedKernels) {
  const auto a = Matrix::from_rows({{1, -1}, {2, 0.5}, {0, 3}});
  const Vector x{2, 4};
  EXPECT_EQ(matvec(a, x), (Vector{-2, 6, 12}));
  EXPECT_THROW(matvec(a, Vector{1, 2, 3}), ShapeError);

  Vector y(2, 1.0);
  matvec_transposed_accumulate(a, Vector{1, 1, 1}, y);
  EXPECT_EQ(y, (Vector{4, 3.5}));

  Matrix o(2, 2);
  outer_accumulate(o, Vector{1, 2}, Vector{3, 4});
  EXPECT_EQ(o, Matrix::from_rows({{3, 4}, {6, 8}}));
}

TEST(Activations, SigmoidIsStableAndSymmetric) {
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
  EXPECT_EQ(sigmoid(-1000.0), 0.0);
  EXPECT_FALSE(std::isnan(sigmoid(-800.0)));
  for (double x : {-7.5, -1.0, -0.1, 0.3, 2.0, 12.0}) {
    EXPECT_NEAR(sigmoid(-x), 1.0 - sigmoid(x), 1e-15);
  }
  EXPECT_EQ(relu(-2.0), 0.0);
  EXPECT_EQ(relu(2.5), 2.5);
  EXPECT_DOUBLE_EQ(tanh_act(0.5), std::tanh(0.5));
}

TEST(Rng, MatchesReferenceGenerator) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    Rng rng(seed);
    RefXoshiro ref(seed);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(rng.next_u64(), ref.next()) << "seed " << seed;
  }
}

TEST(Rng, SameSeedSameStream) {
  Rng a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    differs |= va != c.next_u64();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.seed(), 7u);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(123);
  const int n = 200000;
  double sum = 0, sq = 0, nsum = 0, nsq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
    const double z = rng.normal();
    ASSERT_TRUE(std::isfinite(z));
    nsum += z;
    nsq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
  EXPECT_NEAR(nsum / n, 0.0, 0.01);
  EXPECT_NEAR(nsq / n, 1.0, 0.02);
}

TEST(Rng, MixSeedSeparatesStreams) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(5, 3), mix_seed(5, 3));
}

TEST(Init, UniformInitRespectsScale) {
  Rng rng(9);
  const auto m = uniform_init(rng, 20, 30, 0.25);
  EXPECT_EQ(m.rows(), 20u);
  for (double v : m.values()) {
    EXPECT_GE(v, -0.25);
    EXPECT_LE(v, 0.25);
  }
  EXPECT_THROW(uniform_init(rng, 2, 2, 0.0), std::invalid_argument);
  EXPECT_THROW(uniform_init(rng, 2, 2, std::nan("")), std::invalid_argument);
}

TEST(Init, AllFinite) {
  EXPECT_TRUE(all_finite(Vector{1, 2, -3}));
  EXPECT_TRUE(all_finite(Vector{}));
  EXPECT_FALSE(all_finite(Vector{1, std::numeric_limits<double>::infinity()}));
  EXPECT_FALSE(all_finite(Vector{std::nan("")}));
}
