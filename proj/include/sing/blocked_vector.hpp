#pragma once

// Flat parameter storage with an explicit parameter-tensor (block) structure.
//
// A BlockPartition describes the ordered list of tensors of a model, each
// with a name and a shape. A BlockedVector is a contiguous array of doubles
// laid out block after block according to a shared partition. All reductions
// run left to right over the flat storage so results are reproducible.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sing/errors.hpp"

namespace sing {

struct BlockSpec {
  std::string name;
  std::vector<std::size_t> shape;

  std::size_t rank() const noexcept { return shape.size(); }
  std::size_t numel() const noexcept {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
  }
  bool operator==(const BlockSpec&) const = default;
};

class BlockPartition {
 public:
  explicit BlockPartition(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw UsageError("partition needs at least one block");
    offsets_.reserve(blocks_.size() + 1);
    offsets_.push_back(0);
    for (const auto& b : blocks_) {
      if (b.name.empty()) throw UsageError("block name must be non-empty");
      if (b.name.find_first_of(" \t\n,") != std::string::npos)
        throw UsageError("block name '" + b.name + "' contains whitespace or comma");
      if (b.shape.empty()) throw UsageError("block '" + b.name + "' has an empty shape");
      for (auto d : b.shape)
        if (d == 0) throw UsageError("block '" + b.name + "' has a zero dimension");
      offsets_.push_back(offsets_.back() + b.numel());
    }
  }

  static std::shared_ptr<const BlockPartition> make(std::vector<BlockSpec> blocks) {
    return std::make_shared<const BlockPartition>(std::move(blocks));
  }

  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t size() const noexcept { return offsets_.back(); }
  const BlockSpec& block(std::size_t k) const {
    check_index(k);
    return blocks_[k];
  }
  const std::vector<BlockSpec>& blocks() const noexcept { return blocks_; }
  std::size_t offset(std::size_t k) const {
    check_index(k);
    return offsets_[k];
  }
  std::size_t block_size(std::size_t k) const {
    check_index(k);
    return offsets_[k + 1] - offsets_[k];
  }

  // Index of the block with the given name, or block_count() if absent.
  std::size_t find(const std::string& name) const noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if (blocks_[k].name == name) return k;
    return blocks_.size();
  }

  bool operator==(const BlockPartition& other) const { return blocks_ == other.blocks_; }

  // One line per block: "<name> <d0>x<d1>x...".
  std::string manifest() const {
    std::string out;
    for (const auto& b : blocks_) {
      out += b.name;
      out += ' ';
      for (std::size_t i = 0; i < b.shape.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(b.shape[i]);
      }
      out += '\n';
    }
    return out;
  }

  static std::shared_ptr<const BlockPartition> parse_manifest(const std::string& text) {
    std::vector<BlockSpec> blocks;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string name, dims, extra;
      if (!(ls >> name)) continue;
      if (!(ls >> dims) || (ls >> extra))
        throw UsageError("manifest line " + std::to_string(lineno) + ": expected '<name> <shape>'");
      blocks.push_back({name, parse_shape(dims)});
    }
    return make(std::move(blocks));
  }

  // "3x4x5" -> {3, 4, 5}
  static std::vector<std::size_t> parse_shape(const std::string& dims) {
    std::vector<std::size_t> shape;
    std::size_t pos = 0;
    while (pos <= dims.size()) {
      auto next = dims.find('x', pos);
      if (next == std::string::npos) next = dims.size();
      auto tok = dims.substr(pos, next - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("bad shape '" + dims + "'");
      shape.push_back(std::stoul(tok));
      pos = next + 1;
    }
    return shape;
  }

 private:
  void check_index(std::size_t k) const {
    if (k >= blocks_.size())
      throw UsageError("block index " + std::to_string(k) + " out of range [0, " +
                       std::to_string(blocks_.size()) + ")");
  }

  std::vector<BlockSpec> blocks_;
  std::vector<std::size_t> offsets_;
};

using PartitionPtr = std::shared_ptr<const BlockPartition>;

class BlockedVector {
 public:
  explicit BlockedVector(PartitionPtr partition)
      : partition_(std::move(partition)), values_(checked(partition_).size(), 0.0) {}

  BlockedVector(PartitionPtr partition, std::vector<double> values)
      : partition_(std::move(partition)), values_(std::move(values)) {
    if (values_.size() != checked(partition_).size())
      throw UsageError("value count " + std::to_string(values_.size()) +
                       " does not match partition size " + std::to_string(partition_->size()));
  }

  const BlockPartition& partition() const noexcept { return *partition_; }
  const PartitionPtr& partition_ptr() const noexcept { return partition_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t block_count() const noexcept { return partition_->block_count(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> block(std::size_t k) const {
    return std::span<const double>(values_).subspan(partition_->offset(k), partition_->block_size(k));
  }
  std::span<double> block(std::size_t k) {
    return std::span<double>(values_).subspan(partition_->offset(k), partition_->block_size(k));
  }
  void set_block(std::size_t k, std::span<const double> data) {
    auto dst = block(k);
    if (data.size() != dst.size()) throw UsageError("set_block: size mismatch");
    std::copy(data.begin(), data.end(), dst.begin());
  }

  bool same_partition(const BlockedVector& other) const {
    return partition_ == other.partition_ || *partition_ == *other.partition_;
  }

  bool all_finite() const noexcept {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  BlockedVector zeros_like() const { return BlockedVector(partition_); }

 private:
  static const BlockPartition& checked(const PartitionPtr& p) {
    if (!p) throw UsageError("null partition");
    return *p;
  }

  PartitionPtr partition_;
  std::vector<double> values_;
};

namespace detail {
inline void require_same(const BlockedVector& a, const BlockedVector& b, const char* op) {
  if (!a.same_partition(b)) throw UsageError(std::string(op) + ": partition mismatch");
}

inline double sum_squares(std::span<const double> xs) noexcept {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return s;
}
}  // namespace detail

inline double block_l2_norm(const BlockedVector& v, std::size_t k) {
  return std::sqrt(detail::sum_squares(v.block(k)));
}

inline std::vector<double> block_l2_norms(const BlockedVector& v) {
  std::vector<double> out(v.block_count());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = block_l2_norm(v, k);
  return out;
}

inline double l2_norm(const BlockedVector& v) noexcept {
  return std::sqrt(detail::sum_squares(v.values()));
}

inline double global_mean(const BlockedVector& v) noexcept {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s / static_cast<double>(v.size());
}

inline double global_sum(const BlockedVector& v) noexcept {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s;
}

// N(v) = sum_k ||v_k||_2
inline double structured_norm(const BlockedVector& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.block_count(); ++k) s += block_l2_norm(v, k);
  return s;
}

inline double dot(const BlockedVector& a, const BlockedVector& b) {
  detail::require_same(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline BlockedVector add(const BlockedVector& a, const BlockedVector& b) {
  detail::require_same(a, b, "add");
  BlockedVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

inline BlockedVector subtract(const BlockedVector& a, const BlockedVector& b) {
  detail::require_same(a, b, "subtract");
  BlockedVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

inline BlockedVector scale(const BlockedVector& v, double c) {
  BlockedVector out = v;
  for (auto& x : out.values()) x *= c;
  return out;
}

inline BlockedVector negate(const BlockedVector& v) { return scale(v, -1.0); }

// a + c * b
inline BlockedVector axpy(const BlockedVector& a, double c, const BlockedVector& b) {
  detail::require_same(a, b, "axpy");
  BlockedVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += c * b[i];
  return out;
}

inline BlockedVector operator+(const BlockedVector& a, const BlockedVector& b) { return add(a, b); }
inline BlockedVector operator-(const BlockedVector& a, const BlockedVector& b) { return subtract(a, b); }
inline BlockedVector operator*(double c, const BlockedVector& v) { return scale(v, c); }

}  // namespace sing
