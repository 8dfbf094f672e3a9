#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "sing/checks.hpp"
#include "sing/standardize.hpp"
#include "sing/theory.hpp"

using namespace sing;

namespace {

// Independent reference for centralization: explicit row-mean subtraction
// over a [rows, cols] view, recomputed from scratch per element.
BlockedVector reference_centralize(const BlockedVector& g) {
  BlockedVector out = g;
  for (std::size_t k = 0; k < g.block_count(); ++k) {
    const auto& spec = g.partition().block(k);
    if (spec.shape.size() < 2) continue;
    const std::size_t rows = spec.shape[0], cols = spec.numel() / rows;
    const auto in = g.block(k);
    auto dst = out.block(k);
    for (std::size_t r = 0; r < rows; ++r) {
      long double mean = 0;
      for (std::size_t c = 0; c < cols; ++c) mean += in[r * cols + c];
      mean /= cols;
      for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = static_cast<double>(in[r * cols + c] - mean);
    }
  }
  return out;
}

}  // namespace

TEST(Centralize, RowMeanSubtraction) {
  BlockedVector g(BlockPartition::make({{"W", {2, 2}}}), {1, 2, 3, 4});
  auto c = centralize(g);
  EXPECT_DOUBLE_EQ(c[0], -0.5);
  EXPECT_DOUBLE_EQ(c[1], 0.5);
  EXPECT_DOUBLE_EQ(c[2], -0.5);
  EXPECT_DOUBLE_EQ(c[3], 0.5);
}

TEST(Centralize, RankOneBlocksPassThroughBitIdentical) {
  BlockedVector g(BlockPartition::make({{"b", {3}}, {"W", {1, 2}}}), {1, 2, 3, 5, 7});
  auto c = centralize(g);
  EXPECT_EQ(c[0], 1.0);
  EXPECT_EQ(c[1], 2.0);
  EXPECT_EQ(c[2], 3.0);
  EXPECT_DOUBLE_EQ(c[3], -1.0);
  EXPECT_DOUBLE_EQ(c[4], 1.0);
}

TEST(Centralize, SlicesOfHigherRankBlocksSumToZero) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto part = random_partition(rng, 1 + rng.below(8));
    auto g = random_blocked_vector(part, rng);
    auto c = centralize(g);
    EXPECT_LE(relative_error(c, reference_centralize(g)), 1e-14);
    for (std::size_t k = 0; k < c.block_count(); ++k) {
      if (part->block(k).rank() < 2) continue;
      const double scale_k = block_l2_norm(g, k);
      for (double s : slice_sums(c, k)) EXPECT_LE(std::abs(s), 1e-13 * scale_k);
    }
  }
}

TEST(Centralize, Idempotent) {
  BlockedVector g(BlockPartition::make({{"W", {2, 3}}}), {-1, 0, 1, 2, -4, 2});
  auto c = centralize(g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(c[i], g[i]);
}

TEST(Centralize, LinearIdempotentSelfAdjointOnRandomVectors) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    auto part = random_partition(rng, 1 + rng.below(16));
    auto x = random_blocked_vector(part, rng), y = random_blocked_vector(part, rng);
    const double a = rng.uniform(-3, 3);
    auto lhs = centralize(axpy(x, a, y));
    auto rhs = axpy(centralize(x), a, centralize(y));
    EXPECT_LE(l2_norm(subtract(lhs, rhs)), 1e-12 * (l2_norm(x) + std::abs(a) * l2_norm(y)));
    auto cx = centralize(x);
    EXPECT_LE(l2_norm(subtract(centralize(cx), cx)), 1e-12 * l2_norm(x));
    EXPECT_LE(std::abs(dot(cx, y) - dot(x, centralize(y))), 1e-12 * l2_norm(x) * l2_norm(y));
  }
}

TEST(Gamma, Examples) {
  auto g1 = gamma(BlockedVector(BlockPartition::make({{"a", {2}}}), {3, 4}));
  EXPECT_DOUBLE_EQ(g1[0], 5.0);
  EXPECT_DOUBLE_EQ(g1[1], 5.0);
  auto g2 = gamma(BlockedVector(BlockPartition::make({{"a", {2}}, {"b", {2}}}), {1, 0, 0, 2}));
  EXPECT_DOUBLE_EQ(g2[0], 1.0);
  EXPECT_DOUBLE_EQ(g2[1], 1.0);
  EXPECT_DOUBLE_EQ(g2[2], 2.0);
  EXPECT_DOUBLE_EQ(g2[3], 2.0);
  auto g3 = gamma(BlockedVector(BlockPartition::make({{"a", {2}}, {"z", {2}}}), {1, 0, 0, 0}));
  EXPECT_EQ(g3[2], 0.0);
  EXPECT_EQ(g3[3], 0.0);
}

TEST(SingTransform, NormalizesWithoutCentralization) {
  BlockedVector g(BlockPartition::make({{"a", {2}}}), {3, 4});
  auto u = sing_transform(g, {false, true, 0.0});
  EXPECT_DOUBLE_EQ(u[0], 0.6);
  EXPECT_DOUBLE_EQ(u[1], 0.8);
}

TEST(SingTransform, IdentityWhenBothStagesDisabled) {
  Rng rng(2);
  auto part = random_partition(rng, 5);
  auto g = random_blocked_vector(part, rng);
  auto u = sing_transform(g, {false, false, 1e-8});
  EXPECT_EQ(std::memcmp(u.values().data(), g.values().data(), g.size() * sizeof(double)), 0);
}

TEST(SingTransform, FourBlocksHaveTotalNormTwo) {
  Rng rng(9);
  auto part = BlockPartition::make({{"W1", {4, 3}}, {"b1", {4}}, {"W2", {2, 4}}, {"b2", {2}}});
  for (int i = 0; i < 20; ++i) {
    auto u = sing_transform(random_blocked_vector(part, rng), {true, true, 0.0});
    EXPECT_NEAR(l2_norm(u), 2.0, 2e-15);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(block_l2_norm(u, k), 1.0, 1e-15);
  }
}

TEST(SingTransform, EpsilonShrinksNorms) {
  Rng rng(4);
  auto part = random_partition(rng, 6);
  auto g = scale(random_blocked_vector(part, rng), 1e-6);
  auto exact = sing_transform(g, {true, true, 0.0});
  auto guarded = sing_transform(g, {true, true, 1e-8});
  for (std::size_t k = 0; k < part->block_count(); ++k)
    EXPECT_LE(block_l2_norm(guarded, k), block_l2_norm(exact, k));
}

TEST(SingTransform, ZeroBlockErrorNamesTheBlock) {
  BlockedVector g(BlockPartition::make({{"W", {2, 2}}, {"bias", {2}}}), {1, 2, 3, 4, 0, 0});
  try {
    sing_transform(g, {true, true, 0.0});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.location(), "bias");
  }
  // A block that centralization annihilates is also zero.
  BlockedVector flat(BlockPartition::make({{"W", {2, 2}}}), {1, 1, 2, 2});
  EXPECT_THROW(sing_transform(flat, {true, true, 0.0}), NumericError);
}

TEST(SingTransform, ZeroBlockWithEpsilonGivesZeroUpdate) {
  BlockedVector g(BlockPartition::make({{"a", {2}}, {"z", {2}}}), {3, 4, 0, 0});
  auto u = sing_transform(g, {true, true, 1e-8});
  EXPECT_EQ(u[2], 0.0);
  EXPECT_EQ(u[3], 0.0);
  EXPECT_NEAR(u[0], 0.6, 1e-8);
}

TEST(SingTransform, PositiveRescaleCancels) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    auto part = random_partition(rng, 1 + rng.below(10));
    auto g = random_blocked_vector(part, rng);
    auto u = sing_transform(g, {true, true, 0.0});
    // Power-of-two scales are exact in floating point, so the outputs agree bitwise.
    auto u2 = sing_transform(scale(g, 0x1p37), {true, true, 0.0});
    EXPECT_EQ(std::memcmp(u.values().data(), u2.values().data(), u.size() * sizeof(double)), 0);
    auto u73 = sing_transform(scale(g, 7.3), {true, true, 0.0});
    EXPECT_LE(max_abs_diff(u, u73), 1e-15);
  }
}

TEST(SingTransform, InnerProductIdentities) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    auto part = random_partition(rng, 1 + rng.below(16));
    auto g = random_blocked_vector(part, rng);
    auto u = sing_transform(g, {true, true, 0.0});
    EXPECT_LE(rel_diff(dot(g, u), structured_phi_norm(g)), 1e-9);
    EXPECT_LE(phi_pseudo_norm(g), l2_norm(g) * (1 + 1e-15));
    EXPECT_LE(rel_diff(l2_norm(u), std::sqrt(static_cast<double>(part->block_count()))), 1e-10);
  }
}

TEST(StandardizeConfig, RejectsNegativeEpsilon) {
  StandardizeConfig c{true, true, -1.0};
  EXPECT_THROW(c.validate(), ConfigError);
}
