#pragma once

// Gaussian-blobs classification data and a one-hidden-layer tanh MLP with
// softmax cross-entropy, differentiated by hand-written backprop.
//
// Parameters are laid out as PyTorch-style tensors:
//   W1 [hidden, input]   b1 [hidden]   W2 [classes, hidden]   b2 [classes]
// Biases can be disabled, which leaves only rank-2 blocks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"
#include "sing/landscapes.hpp"
#include "sing/rng.hpp"

namespace sing {

struct BlobsDataset {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t classes = 0;
  std::size_t dim = 0;
  double spread = 0.0;
  std::vector<double> centers;   // classes x dim, row-major
  std::vector<double> features;  // n x dim, row-major
  std::vector<std::size_t> labels;

  std::span<const double> sample(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }

  void write_csv(std::ostream& out) const {
    for (std::size_t j = 0; j < dim; ++j) out << 'x' << j << ',';
    out << "label\n";
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
      for (double v : sample(i)) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << ',';
      }
      out << labels[i] << '\n';
    }
  }
};

// Class k is centred on the unit circle of the first two coordinates at
// angle 2*pi*k/K (other coordinates zero); samples add isotropic Gaussian
// noise of standard deviation `spread`. Labels are i mod K, then shuffled.
inline BlobsDataset make_blobs(std::uint64_t seed, std::size_t n, std::size_t classes, std::size_t dim,
                               double spread) {
  if (classes < 2 || n < classes) throw UsageError("make_blobs: need n >= K >= 2");
  if (dim < 1) throw UsageError("make_blobs: dim must be >= 1");
  if (!(spread >= 0.0)) throw UsageError("make_blobs: spread must be >= 0");
  BlobsDataset d;
  d.seed = seed;
  d.n = n;
  d.classes = classes;
  d.dim = dim;
  d.spread = spread;
  d.centers.assign(classes * dim, 0.0);
  for (std::size_t k = 0; k < classes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(classes);
    d.centers[k * dim] = std::cos(angle);
    if (dim > 1) d.centers[k * dim + 1] = std::sin(angle);
  }
  Rng rng(seed);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.labels[i] = i % classes;
  rng.shuffle(d.labels.begin(), d.labels.end());
  d.features.resize(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      d.features[i * dim + j] = d.centers[d.labels[i] * dim + j] + spread * rng.normal();
  return d;
}

class MlpTask final : public Landscape {
 public:
  MlpTask(BlobsDataset data, std::size_t hidden, bool use_bias = true)
      : data_(std::move(data)), hidden_(hidden), bias_(use_bias) {
    if (hidden_ < 1) throw UsageError("MlpTask: hidden width must be >= 1");
    std::vector<BlockSpec> blocks;
    blocks.push_back({"W1", {hidden_, data_.dim}});
    if (bias_) blocks.push_back({"b1", {hidden_}});
    blocks.push_back({"W2", {data_.classes, hidden_}});
    if (bias_) blocks.push_back({"b2", {data_.classes}});
    part_ = BlockPartition::make(std::move(blocks));
  }

  std::string name() const override { return "mlp"; }
  const PartitionPtr& partition() const override { return part_; }
  std::size_t sample_count() const override { return data_.n; }
  const BlobsDataset& data() const { return data_; }
  std::size_t hidden() const { return hidden_; }
  bool has_bias() const { return bias_; }

  // Weights ~ N(0, 1/fan_in), biases zero.
  BlockedVector initial_parameters(std::uint64_t seed) const {
    BlockedVector x(part_);
    Rng rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
    const auto w1 = x.block(0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(data_.dim));
    for (double& v : w1) v = s1 * rng.normal();
    const auto w2 = x.block(bias_ ? 2 : 1);
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_));
    for (double& v : w2) v = s2 * rng.normal();
    return x;
  }

  Evaluation evaluate(const BlockedVector& x) const override {
    std::vector<std::size_t> all(data_.n);
    for (std::size_t i = 0; i < data_.n; ++i) all[i] = i;
    return evaluate_batch(x, all);
  }

  Evaluation evaluate_batch(const BlockedVector& x, std::span<const std::size_t> batch) const override {
    if (batch.empty()) throw UsageError("MlpTask: empty batch");
    for (auto i : batch)
      if (i >= data_.n) throw UsageError("MlpTask: sample index " + std::to_string(i) + " out of range");
    Evaluation e{0.0, x.zeros_like()};
    Workspace ws(hidden_, data_.classes);
    for (auto i : batch) e.value += accumulate_sample(x, i, e.grad, ws);
    const double inv = 1.0 / static_cast<double>(batch.size());
    e.value *= inv;
    for (double& g : e.grad.values()) g *= inv;
    return e;
  }

  std::size_t predict(const BlockedVector& x, std::size_t i) const {
    Workspace ws(hidden_, data_.classes);
    forward(x, i, ws);
    return static_cast<std::size_t>(std::max_element(ws.z.begin(), ws.z.end()) - ws.z.begin());
  }

  double accuracy(const BlockedVector& x) const {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data_.n; ++i) correct += predict(x, i) == data_.labels[i];
    return static_cast<double>(correct) / static_cast<double>(data_.n);
  }

 private:
  struct Workspace {
    Workspace(std::size_t h, std::size_t k) : hid(h), z(k), dz(k), dh(h) {}
    std::vector<double> hid, z, dz, dh;
  };

  struct Views {
    std::span<const double> W1, b1, W2, b2;
  };

  Views views(const BlockedVector& x) const {
    if (bias_) return {x.block(0), x.block(1), x.block(2), x.block(3)};
    return {x.block(0), {}, x.block(1), {}};
  }

  void forward(const BlockedVector& x, std::size_t i, Workspace& ws) const {
    const auto [W1, b1, W2, b2] = views(x);
    const auto in = data_.sample(i);
    const std::size_t d = data_.dim, K = data_.classes;
    for (std::size_t h = 0; h < hidden_; ++h) {
      double a = bias_ ? b1[h] : 0.0;
      for (std::size_t j = 0; j < d; ++j) a += W1[h * d + j] * in[j];
      ws.hid[h] = std::tanh(a);
    }
    for (std::size_t k = 0; k < K; ++k) {
      double z = bias_ ? b2[k] : 0.0;
      for (std::size_t h = 0; h < hidden_; ++h) z += W2[k * hidden_ + h] * ws.hid[h];
      ws.z[k] = z;
    }
  }

  // Adds the gradient of sample i's loss into grad and returns the loss.
  double accumulate_sample(const BlockedVector& x, std::size_t i, BlockedVector& grad, Workspace& ws) const {
    forward(x, i, ws);
    const auto W2 = views(x).W2;
    const std::size_t d = data_.dim, K = data_.classes;
    const std::size_t y = data_.labels[i];
    const double zmax = *std::max_element(ws.z.begin(), ws.z.end());
    double denom = 0.0;
    for (std::size_t k = 0; k < K; ++k) denom += std::exp(ws.z[k] - zmax);
    const double log_norm = zmax + std::log(denom);
    for (std::size_t k = 0; k < K; ++k) ws.dz[k] = std::exp(ws.z[k] - log_norm) - (k == y ? 1.0 : 0.0);

    const std::size_t iW1 = 0, ib1 = 1, iW2 = bias_ ? 2 : 1, ib2 = 3;
    auto gW2 = grad.block(iW2);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t h = 0; h < hidden_; ++h) gW2[k * hidden_ + h] += ws.dz[k] * ws.hid[h];
    if (bias_) {
      auto gb2 = grad.block(ib2);
      for (std::size_t k = 0; k < K; ++k) gb2[k] += ws.dz[k];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += W2[k * hidden_ + h] * ws.dz[k];
      ws.dh[h] = s * (1.0 - ws.hid[h] * ws.hid[h]);
    }
    const auto in = data_.sample(i);
    auto gW1 = grad.block(iW1);
    for (std::size_t h = 0; h < hidden_; ++h)
      for (std::size_t j = 0; j < d; ++j) gW1[h * d + j] += ws.dh[h] * in[j];
    if (bias_) {
      auto gb1 = grad.block(ib1);
      for (std::size_t h = 0; h < hidden_; ++h) gb1[h] += ws.dh[h];
    }
    return log_norm - ws.z[y];
  }

  BlobsDataset data_;
  std::size_t hidden_;
  bool bias_;
  PartitionPtr part_;
};

// Minibatches drawn without replacement: each epoch is a fresh seeded
// permutation cut into floor(n / B) batches of exactly B samples.
class BatchSampler {
 public:
  BatchSampler(std::size_t n, std::size_t batch_size, std::uint64_t seed)
      : n_(n), batch_(batch_size), rng_(seed ^ 0x5851F42D4C957F2DULL), order_(n) {
    if (batch_ < 1 || batch_ > n_) throw UsageError("BatchSampler: batch size must be in [1, n]");
    for (std::size_t i = 0; i < n_; ++i) order_[i] = i;
    cursor_ = n_;  // forces a shuffle on first use
  }

  std::size_t batches_per_epoch() const { return n_ / batch_; }

  std::span<const std::size_t> next() {
    if (cursor_ + batch_ > n_) {
      rng_.shuffle(order_.begin(), order_.end());
      cursor_ = 0;
    }
    auto out = std::span<const std::size_t>(order_).subspan(cursor_, batch_);
    cursor_ += batch_;
    return out;
  }

 private:
  std::size_t n_, batch_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_;
};

}  // namespace sing
