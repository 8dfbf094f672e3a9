#pragma once

// Differentiable objectives with analytic gradients, and a central-difference
// gradient oracle used to verify them.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"

namespace sing {

struct Evaluation {
  double value;
  BlockedVector grad;
};

class Landscape {
 public:
  virtual ~Landscape() = default;

  virtual std::string name() const = 0;
  virtual const PartitionPtr& partition() const = 0;
  virtual Evaluation evaluate(const BlockedVector& x) const = 0;

  // Stochastic landscapes expose samples that can be evaluated in batches.
  virtual std::size_t sample_count() const { return 0; }
  virtual Evaluation evaluate_batch(const BlockedVector& x, std::span<const std::size_t> batch) const {
    (void)batch;
    return evaluate(x);
  }

  std::size_t dimension() const { return partition()->size(); }
};

// Evaluate with the landscape's contract checks: matching partition and a
// finite result.
inline Evaluation eval(const Landscape& l, const BlockedVector& x) {
  if (x.partition_ptr() != l.partition() && !(x.partition() == *l.partition()))
    throw UsageError("eval: point does not match the partition of " + l.name());
  Evaluation e = l.evaluate(x);
  if (!std::isfinite(e.value)) throw NumericError("non-finite objective", l.name());
  for (std::size_t k = 0; k < e.grad.block_count(); ++k)
    for (double g : e.grad.block(k))
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient", l.name() + ":" + e.grad.partition().block(k).name);
  return e;
}

inline BlockedVector fd_gradient(const Landscape& l, const BlockedVector& x, double h) {
  if (!(h > 0.0)) throw UsageError("fd_gradient: step must be > 0");
  BlockedVector grad = x.zeros_like();
  BlockedVector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    probe[i] = xi + h;
    const double fp = l.evaluate(probe).value;
    probe[i] = xi - h;
    const double fm = l.evaluate(probe).value;
    probe[i] = xi;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// ||a - b|| / max(||a||, ||b||, floor)
inline double relative_error(const BlockedVector& a, const BlockedVector& b, double floor = 1e-12) {
  const double scale_ab = std::max({l2_norm(a), l2_norm(b), floor});
  return l2_norm(subtract(a, b)) / scale_ab;
}

// F(x) = L/2 * ||x - center||^2
class Quadratic final : public Landscape {
 public:
  Quadratic(PartitionPtr part, double L) : Quadratic(part, L, BlockedVector(part)) {}
  Quadratic(PartitionPtr part, double L, BlockedVector center)
      : part_(std::move(part)), L_(L), center_(std::move(center)) {
    if (!(L > 0.0)) throw UsageError("Quadratic: L must be > 0");
  }

  std::string name() const override { return "quadratic"; }
  const PartitionPtr& partition() const override { return part_; }
  double smoothness() const { return L_; }

  Evaluation evaluate(const BlockedVector& x) const override {
    BlockedVector d = subtract(x, center_);
    double sq = 0.0;
    for (double v : d.values()) sq += v * v;
    return {0.5 * L_ * sq, scale(d, L_)};
  }

 private:
  PartitionPtr part_;
  double L_;
  BlockedVector center_;
};

// F(x) = <a, x> + b
class Linear final : public Landscape {
 public:
  Linear(BlockedVector a, double b) : a_(std::move(a)), b_(b), part_(a_.partition_ptr()) {}
  std::string name() const override { return "linear"; }
  const PartitionPtr& partition() const override { return part_; }
  Evaluation evaluate(const BlockedVector& x) const override { return {dot(a_, x) + b_, a_}; }

 private:
  BlockedVector a_;
  double b_;
  PartitionPtr part_;
};

// F(x, y) = (a - x)^2 + b (y - x^2)^2, one block of shape [2].
class Rosenbrock final : public Landscape {
 public:
  explicit Rosenbrock(double a = 1.0, double b = 100.0)
      : a_(a), b_(b), part_(BlockPartition::make({{"xy", {2}}})) {}

  std::string name() const override { return "rosenbrock"; }
  const PartitionPtr& partition() const override { return part_; }

  Evaluation evaluate(const BlockedVector& v) const override {
    const double x = v[0], y = v[1];
    const double r = y - x * x;
    BlockedVector g(part_);
    g[0] = -2.0 * (a_ - x) - 4.0 * b_ * x * r;
    g[1] = 2.0 * b_ * r;
    return {(a_ - x) * (a_ - x) + b_ * r * r, std::move(g)};
  }

 private:
  double a_, b_;
  PartitionPtr part_;
};

struct GaussianWell {
  double depth;
  double center;
  double width;
};

// F(x) = c x^2 - sum_i a_i exp(-(x - mu_i)^2 / (2 s_i^2)) + sum_i a_i
// The constant keeps F >= 0 everywhere.
class GaussianWells1D final : public Landscape {
 public:
  GaussianWells1D(double c, std::vector<GaussianWell> wells)
      : c_(c), wells_(std::move(wells)), part_(BlockPartition::make({{"x", {1}}})) {
    if (!(c >= 0.0)) throw UsageError("GaussianWells1D: c must be >= 0");
    if (wells_.empty()) throw UsageError("GaussianWells1D: need at least one well");
    offset_ = 0.0;
    for (const auto& w : wells_) {
      if (!(w.depth > 0.0) || !(w.width > 0.0)) throw UsageError("GaussianWells1D: depth and width must be > 0");
      offset_ += w.depth;
    }
  }

  // Two narrow local minima and one wide global minimum.
  static GaussianWells1D standard() {
    return GaussianWells1D(0.02, {{0.8, -4.0, 0.10}, {0.9, -1.5, 0.12}, {2.0, 2.5, 1.0}});
  }

  std::string name() const override { return "wells"; }
  const PartitionPtr& partition() const override { return part_; }
  const std::vector<GaussianWell>& wells() const { return wells_; }
  double quadratic_coefficient() const { return c_; }

  double value_at(double x) const {
    double f = c_ * x * x + offset_;
    for (const auto& w : wells_) {
      const double d = x - w.center;
      f -= w.depth * std::exp(-d * d / (2.0 * w.width * w.width));
    }
    return f;
  }

  double derivative_at(double x) const {
    double g = 2.0 * c_ * x;
    for (const auto& w : wells_) {
      const double d = x - w.center;
      const double s2 = w.width * w.width;
      g += w.depth * d / s2 * std::exp(-d * d / (2.0 * s2));
    }
    return g;
  }

  Evaluation evaluate(const BlockedVector& x) const override {
    BlockedVector g(part_);
    g[0] = derivative_at(x[0]);
    return {value_at(x[0]), std::move(g)};
  }

 private:
  double c_;
  std::vector<GaussianWell> wells_;
  double offset_;
  PartitionPtr part_;
};

// alpha * F, used to check invariance to objective rescaling.
class ScaledLandscape final : public Landscape {
 public:
  ScaledLandscape(std::shared_ptr<const Landscape> base, double alpha) : base_(std::move(base)), alpha_(alpha) {
    if (!(alpha > 0.0)) throw UsageError("ScaledLandscape: alpha must be > 0");
  }
  std::string name() const override { return base_->name() + "*" + std::to_string(alpha_); }
  const PartitionPtr& partition() const override { return base_->partition(); }
  std::size_t sample_count() const override { return base_->sample_count(); }

  Evaluation evaluate(const BlockedVector& x) const override { return scaled(base_->evaluate(x)); }
  Evaluation evaluate_batch(const BlockedVector& x, std::span<const std::size_t> batch) const override {
    return scaled(base_->evaluate_batch(x, batch));
  }

 private:
  Evaluation scaled(Evaluation e) const {
    e.value *= alpha_;
    for (double& g : e.grad.values()) g *= alpha_;
    return e;
  }

  std::shared_ptr<const Landscape> base_;
  double alpha_;
};

}  // namespace sing
