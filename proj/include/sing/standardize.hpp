#pragma once

// Gradient standardization: per-slice centralization followed by per-block
// normalization.
//
//   centralize: for every block of rank > 1, subtract from each first-axis
//               slice its mean over the remaining axes. Rank-1 blocks are
//               passed through untouched.
//   gamma:      maps each coordinate to the L2 norm of the block holding it.
//   transform:  g -> c(g) / (gamma(c(g)) + eps), c = centralize or identity.
//
// centralize is a linear orthogonal projector (idempotent, self-adjoint), and
// with eps = 0 every block of the transformed vector has unit norm, so the
// whole vector has norm sqrt(D).

#include <cstddef>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"

namespace sing {

struct StandardizeConfig {
  bool centralize_enabled = true;
  bool normalize_enabled = true;
  double epsilon = 1e-8;

  void validate() const {
    if (!(epsilon >= 0.0)) throw ConfigError("sing.epsilon must be >= 0");
  }
};

// Number of first-axis slices and the length of each slice for block k.
// Rank-1 blocks report a single slice covering the whole block.
struct SliceLayout {
  std::size_t count;
  std::size_t length;
};

inline SliceLayout slice_layout(const BlockPartition& part, std::size_t k) {
  const auto& spec = part.block(k);
  if (spec.rank() <= 1) return {1, spec.numel()};
  return {spec.shape[0], spec.numel() / spec.shape[0]};
}

inline BlockedVector centralize(const BlockedVector& g) {
  BlockedVector out = g;
  const auto& part = g.partition();
  for (std::size_t k = 0; k < part.block_count(); ++k) {
    if (part.block(k).rank() <= 1) continue;
    const auto [count, length] = slice_layout(part, k);
    auto blk = out.block(k);
    for (std::size_t s = 0; s < count; ++s) {
      auto slice = blk.subspan(s * length, length);
      double sum = 0.0;
      for (double x : slice) sum += x;
      const double mean = sum / static_cast<double>(length);
      for (double& x : slice) x -= mean;
    }
  }
  return out;
}

// Sums of every first-axis slice of block k (one entry for rank-1 blocks).
inline std::vector<double> slice_sums(const BlockedVector& v, std::size_t k) {
  const auto [count, length] = slice_layout(v.partition(), k);
  auto blk = v.block(k);
  std::vector<double> sums(count, 0.0);
  for (std::size_t s = 0; s < count; ++s)
    for (double x : blk.subspan(s * length, length)) sums[s] += x;
  return sums;
}

inline BlockedVector gamma(const BlockedVector& g) {
  BlockedVector out = g.zeros_like();
  for (std::size_t k = 0; k < g.block_count(); ++k) {
    const double n = block_l2_norm(g, k);
    for (double& x : out.block(k)) x = n;
  }
  return out;
}

// Divide every block by (its L2 norm + eps). With eps == 0 a zero block is an
// error naming the block; with eps > 0 a zero block maps to zero.
inline BlockedVector normalize_blocks(const BlockedVector& g, double eps) {
  BlockedVector out = g;
  for (std::size_t k = 0; k < g.block_count(); ++k) {
    const double denom = block_l2_norm(g, k) + eps;
    if (denom == 0.0)
      throw NumericError("division by zero: block has zero norm after standardization",
                         g.partition().block(k).name);
    for (double& x : out.block(k)) x /= denom;
  }
  return out;
}

inline BlockedVector sing_transform(const BlockedVector& g, const StandardizeConfig& cfg) {
  BlockedVector c = cfg.centralize_enabled ? centralize(g) : g;
  if (!cfg.normalize_enabled) return c;
  return normalize_blocks(c, cfg.epsilon);
}

}  // namespace sing
