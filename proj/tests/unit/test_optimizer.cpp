// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "newsblend/optimizer.hpp"

using namespace newsblend;

TEST(Optimizer, NamesRoundTrip) {
  EXPECT_EQ(optimizer_from_string("adam"), OptimizerKind::adam);
  EXPECT_EQ(to_string(OptimizerKind::sgd), "sgd");
  EXPECT_THROW(optimizer_from_string("rmsprop"), std::invalid_argument);
}

TEST(Optimizer, RejectsNonPositiveLearningRate) {
  EXPECT_THROW(Optimizer(OptimizerKind::adam, 0.0), std::invalid_argument);
  EXPECT_THROW(Optimizer(OptimizerKind::sgd, -1.0), std::invalid_argument);
}

TEST(Optimizer, SgdStep) {
  Vector p{1.0, -2.0}, g{0.5, 4.0};
  std::vector<std::span<double>> ps{p}, gs{g};
  Optimizer opt(OptimizerKind::sgd, 0.1);
  opt.step(ps, gs);
  EXPECT_DOUBLE_EQ(p[0], 0.95);
  EXPECT_DOUBLE_EQ(p[1], -2.4);
  EXPECT_EQ(opt.steps_taken(), 1u);
}

TEST(Optimizer, AdamMatchesLonghandRecurrence) {
  Vector p{0.3, -0.7, 1.1};
  const std::vector<Vector> grads{{0.2, -1.0, 3.0}, {-0.4, 0.5, 2.0}, {0.1, 0.0, -1.5}};
  Vector ref = p, m(3, 0.0), v(3, 0.0);
  Optimizer opt(OptimizerKind::adam, 0.01);
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    Vector g = grads[t - 1];
    std::vector<std::span<double>> ps{p}, gs{g};
    opt.step(ps, gs);
    for (std::size_t j = 0; j < 3; ++j) {
      m[j] = 0.9 * m[j] + 0.1 * g[j];
      v[j] = 0.999 * v[j] + 0.001 * g[j] * g[j];
      const double mh = m[j] / (1 - std::pow(0.9, double(t)));
      const double vh = v[j] / (1 - std::pow(0.999, double(t)));
      ref[j] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    }
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(p[j], ref[j], 1e-15);
  }
}

TEST(Optimizer, AdamFirstStepHasLearningRateMagnitude) {
  Vector p{0.0, 0.0}, g{1e-3, -50.0};
  std::vector<std::span<double>> ps{p}, gs{g};
  Optimizer opt(OptimizerKind::adam, 0.05);
  opt.step(ps, gs);
  EXPECT_NEAR(p[0], -0.05, 1e-6);
  EXPECT_NEAR(p[1], 0.05, 1e-9);
}

TEST(Optimizer, TensorCountMismatchThrows) {
  Vector p{1.0}, g{1.0};
  std::vector<std::span<double>> ps{p, p}, gs{g};
  Optimizer opt(OptimizerKind::adam, 0.1);
  EXPECT_THROW(opt.step(ps, gs), ShapeError);
}

TEST(ClipGlobalNorm, ScalesJointNorm) {
  Vector a{3.0, 0.0}, b{4.0};
  std::vector<std::span<double>> gs{a, b};
  EXPECT_DOUBLE_EQ(clip_global_norm(gs, 1.0), 5.0);
  EXPECT_NEAR(a[0], 0.6, 1e-15);
  EXPECT_NEAR(b[0], 0.8, 1e-15);
  EXPECT_NEAR(clip_global_norm(gs, 1.0), 1.0, 1e-15);
}

TEST(ClipGlobalNorm, BelowThresholdOrDisabledIsNoOp) {
  Vector a{0.3, 0.4};
  std::vector<std::span<double>> gs{a};
  EXPECT_DOUBLE_EQ(clip_global_norm(gs, 5.0), 0.5);
  EXPECT_EQ(a, (Vector{0.3, 0.4}));
  Vector big{300.0, 400.0};
  std::vector<std::span<double>> bs{big};
  EXPECT_DOUBLE_EQ(clip_global_norm(bs, 0.0), 500.0);
  EXPECT_EQ(big, (Vector{300.0, 400.0}));
}

namespace {

struct Toy {
  Matrix w{2, 2, 1.0};
  Vector b{1.0, 2.0, 3.0};
  template <class F>
  void for_each_tensor(F&& f) {
    f("w", w);
    f("b", b);
  }
};

}  // namespace

TEST(ParameterSpans, CoversEveryTensor) {
  Toy toy;
  const auto spans = parameter_spans(toy);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].size(), 4u);
  EXPECT_EQ(spans[1].size(), 3u);
  spans[1][2] = 9.0;
  EXPECT_EQ(toy.b[2], 9.0);
}
