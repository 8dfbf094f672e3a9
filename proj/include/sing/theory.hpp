#pragma once

// Executable forms of the escape and convergence results:
//
//  * escape thresholds for GD, normalized GD and the standardized step,
//  * a sampled estimate of the basin-ball radius around a critical point,
//  * a one-step escape check over a grid of start points,
//  * step-size / horizon / batch-size recipes and an audit of the
//    time-averaged gradient norm against the convergence bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"
#include "sing/landscapes.hpp"
#include "sing/mlp.hpp"
#include "sing/optimizers.hpp"
#include "sing/rng.hpp"
#include "sing/standardize.hpp"

namespace sing {

// ||v||_phi = sqrt(<v, centralize(v)>) = ||centralize(v)||_2
inline double phi_pseudo_norm(const BlockedVector& v) {
  return std::sqrt(std::max(0.0, dot(v, centralize(v))));
}

// sum_k ||v_k||_phi
inline double structured_phi_norm(const BlockedVector& v) {
  const BlockedVector c = centralize(v);
  double total = 0.0;
  for (std::size_t k = 0; k < v.block_count(); ++k) {
    auto a = v.block(k), b = c.block(k);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    total += std::sqrt(std::max(0.0, s));
  }
  return total;
}

struct EscapeThresholds {
  double r;
  double grad_norm;
  std::size_t D;
  double eta_sing;
  double eta_ngd;
  double eta_gd;  // +inf when grad_norm == 0
};

inline EscapeThresholds escape_thresholds(double r, double grad_norm, std::size_t D) {
  if (!(r >= 0.0)) throw UsageError("escape_thresholds: r must be >= 0");
  if (D < 1) throw UsageError("escape_thresholds: D must be >= 1");
  if (!(grad_norm >= 0.0)) throw UsageError("escape_thresholds: grad_norm must be >= 0");
  const double eta_gd = grad_norm > 0.0 ? 2.0 * r / grad_norm : std::numeric_limits<double>::infinity();
  return {r, grad_norm, D, 2.0 * r / std::sqrt(static_cast<double>(D)), 2.0 * r, eta_gd};
}

namespace detail {
// Solves A x = b in place (row-major n x n) with partial pivoting.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
    if (A[piv * n + c] == 0.0) throw NumericError("singular Hessian while locating critical point");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A[c * n + j], A[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r * n + c] / A[c * n + c];
      for (std::size_t j = c; j < n; ++j) A[r * n + j] -= f * A[c * n + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
    x[i] = s / A[i * n + i];
  }
  return x;
}
}  // namespace detail

// Newton iteration on the gradient with a central-difference Hessian. Meant
// for the low-dimensional landscapes the escape checks run on.
inline BlockedVector locate_critical_point(const Landscape& l, BlockedVector x, double tol = 1e-12,
                                           int max_iter = 100) {
  const std::size_t n = x.size();
  for (int it = 0; it < max_iter; ++it) {
    const BlockedVector g = l.evaluate(x).grad;
    if (l2_norm(g) < tol) return x;
    std::vector<double> H(n * n);
    BlockedVector probe = x;
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      probe[j] = x[j] + h;
      const BlockedVector gp = l.evaluate(probe).grad;
      probe[j] = x[j] - h;
      const BlockedVector gm = l.evaluate(probe).grad;
      probe[j] = x[j];
      for (std::size_t i = 0; i < n; ++i) H[i * n + j] = (gp[i] - gm[i]) / (2.0 * h);
    }
    std::vector<double> rhs(g.values().begin(), g.values().end());
    const auto dx = detail::solve_dense(std::move(H), std::move(rhs));
    for (std::size_t i = 0; i < n; ++i) x[i] -= dx[i];
  }
  return x;
}

struct BasinOptions {
  double max_radius = 10.0;          // sampling-box limit
  std::size_t radial_samples = 4000;  // grid points per ray up to max_radius
  std::size_t random_directions = 64; // in addition to +-axes, when p > 1
  int bisection_steps = 60;
  std::uint64_t seed = 1;
  double critical_tol = 1e-8;
};

// Largest rho such that <grad F(x), x - x*> >= 0 at every sampled point with
// ||x - x*|| <= rho. Samples lie on rays from x* (both directions in 1-D;
// +-axes plus random directions otherwise); the first failing grid point on
// each ray is refined by bisection. Returns a lower-bound estimate, capped at
// max_radius.
inline double estimate_basin_radius(const Landscape& l, const BlockedVector& x_star, const BasinOptions& opt = {}) {
  const double gnorm = l2_norm(l.evaluate(x_star).grad);
  if (!(gnorm < opt.critical_tol))
    throw UsageError("estimate_basin_radius: point is not critical (|grad| = " + std::to_string(gnorm) + ")");
  const std::size_t p = x_star.size();
  std::vector<BlockedVector> dirs;
  for (std::size_t i = 0; i < p; ++i)
    for (double s : {1.0, -1.0}) {
      BlockedVector u = x_star.zeros_like();
      u[i] = s;
      dirs.push_back(std::move(u));
    }
  if (p > 1) {
    Rng rng(opt.seed);
    for (std::size_t d = 0; d < opt.random_directions; ++d) {
      BlockedVector u = x_star.zeros_like();
      for (double& v : u.values()) v = rng.normal();
      dirs.push_back(scale(u, 1.0 / l2_norm(u)));
    }
  }
  auto inside = [&](const BlockedVector& u, double rho) {
    const BlockedVector x = axpy(x_star, rho, u);
    return rho * dot(l.evaluate(x).grad, u) >= 0.0;
  };
  double best = opt.max_radius;
  const double spacing = opt.max_radius / static_cast<double>(opt.radial_samples);
  for (const auto& u : dirs) {
    double good = 0.0;
    std::optional<double> bad;
    for (std::size_t j = 1; j <= opt.radial_samples; ++j) {
      const double rho = spacing * static_cast<double>(j);
      if (rho > best) break;
      if (!inside(u, rho)) {
        bad = rho;
        break;
      }
      good = rho;
    }
    if (!bad) continue;
    double lo = good, hi = *bad;
    for (int s = 0; s < opt.bisection_steps; ++s) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (inside(u, mid) ? lo : hi) = mid;
    }
    best = std::min(best, lo);
  }
  return best;
}

enum class StepMethod { GD, NGD, SING };

inline const char* to_string(StepMethod m) {
  switch (m) {
    case StepMethod::GD: return "gd";
    case StepMethod::NGD: return "ngd";
    case StepMethod::SING: return "sing";
  }
  return "?";
}

// One deterministic step x - eta * g(x) of the chosen method. The
// standardized step uses eps = 0 with centralization as configured.
inline BlockedVector single_step(const Landscape& l, const BlockedVector& x, double eta, StepMethod method,
                                 bool centralize_enabled = true) {
  const BlockedVector g = l.evaluate(x).grad;
  switch (method) {
    case StepMethod::GD: return axpy(x, -eta, g);
    case StepMethod::NGD: return axpy(x, -eta / l2_norm(g), g);
    case StepMethod::SING: {
      const StandardizeConfig cfg{centralize_enabled, true, 0.0};
      return axpy(x, -eta, sing_transform(g, cfg));
    }
  }
  return x;
}

struct EscapeOptions {
  std::size_t points = 1000;
  double grad_floor = 1e-12;  // starts with smaller gradient norm are skipped
  bool centralize_enabled = true;
  std::uint64_t seed = 7;
};

struct EscapeSample {
  BlockedVector start;
  double grad_norm;
  bool skipped;
  bool escaped;
  double end_distance;
};

struct EscapeReport {
  std::vector<EscapeSample> samples;
  std::size_t tested = 0;
  std::size_t escaped = 0;
  std::size_t skipped = 0;

  bool all_escaped() const { return tested > 0 && escaped == tested; }
  bool none_escaped() const { return escaped == 0; }
};

// Start points lie strictly inside the ball of radius r around x*: in 1-D a
// uniform midpoint grid, otherwise uniform random samples in the ball.
inline EscapeReport single_step_escape_check(const Landscape& l, const BlockedVector& x_star, double r, double eta,
                                             StepMethod method, const EscapeOptions& opt = {}) {
  if (!(r > 0.0)) throw UsageError("single_step_escape_check: radius must be > 0");
  if (!(eta >= 0.0)) throw UsageError("single_step_escape_check: eta must be >= 0");
  EscapeReport rep;
  const std::size_t p = x_star.size();
  Rng rng(opt.seed);
  for (std::size_t i = 0; i < opt.points; ++i) {
    BlockedVector start = x_star;
    if (p == 1) {
      start[0] += r * (-1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(opt.points));
    } else {
      BlockedVector u = x_star.zeros_like();
      for (double& v : u.values()) v = rng.normal();
      const double rho = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(p)) * (1.0 - 1e-12);
      start = axpy(x_star, rho / l2_norm(u), u);
    }
    const double gn = l2_norm(l.evaluate(start).grad);
    EscapeSample s{start, gn, false, false, 0.0};
    if (!(gn >= opt.grad_floor)) {
      s.skipped = true;
      ++rep.skipped;
    } else {
      const BlockedVector next =
          eta == 0.0 ? start : single_step(l, start, eta, method, opt.centralize_enabled);
      s.end_distance = l2_norm(subtract(next, x_star));
      s.escaped = s.end_distance > r;
      ++rep.tested;
      rep.escaped += s.escaped;
    }
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

// Parameter recipe of the convergence bounds for target precision eps.
struct ConvergenceRecipe {
  double epsilon;
  double L;
  double F0;
  double sigma = 0.0;
  std::size_t D = 1;

  double eta() const { return 2.0 * epsilon / L; }
  std::uint64_t T() const { return ceil_count(L * F0 / (2.0 * epsilon * epsilon)); }
  std::uint64_t B() const { return std::max<std::uint64_t>(1, ceil_count(sigma * sigma / (epsilon * epsilon))); }
  double simplified_bound() const {
    const double d = static_cast<double>(D);
    return (2.0 + std::sqrt(d) + d) * epsilon;
  }
  // F0/(eta T) + (1 + sqrt D) eps + eta L D / 2
  double full_bound(double eta_used, std::uint64_t steps) const {
    const double d = static_cast<double>(D);
    return F0 / (eta_used * static_cast<double>(steps)) + (1.0 + std::sqrt(d)) * epsilon + eta_used * L * d / 2.0;
  }

  void validate() const {
    if (!(epsilon > 0.0 && L > 0.0 && F0 > 0.0)) throw UsageError("ConvergenceRecipe: epsilon, L, F0 must be > 0");
    if (!(sigma >= 0.0)) throw UsageError("ConvergenceRecipe: sigma must be >= 0");
    if (D < 1) throw UsageError("ConvergenceRecipe: D must be >= 1");
  }

  // Rounds up, treating values within 1e-9 relative of an integer as that integer.
  static std::uint64_t ceil_count(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(v));
  }
};

enum class NormMode { L2, Phi };

// Full-gradient norms at x_0 .. x_{T-1} of a run.
struct ConvergenceTrace {
  std::vector<double> grad_l2;
  std::vector<double> grad_phi;
  std::vector<double> loss;
};

struct AuditResult {
  double lhs;
  double rhs;
  bool pass;
  double simplified_rhs;
  bool simplified_pass;
};

inline AuditResult convergence_audit(const ConvergenceTrace& trace, const ConvergenceRecipe& recipe, NormMode mode) {
  recipe.validate();
  const std::uint64_t T = recipe.T();
  const auto& norms = mode == NormMode::L2 ? trace.grad_l2 : trace.grad_phi;
  if (norms.size() < T)
    throw UsageError("convergence_audit: trace has " + std::to_string(norms.size()) + " steps, recipe needs " +
                     std::to_string(T));
  double sum = 0.0;
  for (std::uint64_t t = 0; t < T; ++t) sum += norms[t];
  const double lhs = sum / static_cast<double>(T);
  const double rhs = recipe.full_bound(recipe.eta(), T);
  const double simple = recipe.simplified_bound();
  return {lhs, rhs, lhs <= rhs, simple, lhs <= simple};
}

// Runs T iterates of the standardized step with constant step size eta and a
// momentum-free SGD host, recording full-gradient norms at every iterate.
// With batch_size > 0 the step uses minibatch gradients from a seeded
// sampler; otherwise the exact gradient. A block whose (centralized) gradient
// is exactly zero takes a zero step, the eps -> 0 limit of g / (||g|| + eps);
// the deterministic quadratic runs land on the minimizer exactly.
inline ConvergenceTrace run_for_audit(const Landscape& l, BlockedVector x, double eta, std::uint64_t T,
                                      bool centralize_enabled, std::size_t batch_size = 0, std::uint64_t seed = 0) {
  std::optional<BatchSampler> sampler;
  if (batch_size > 0) sampler.emplace(l.sample_count(), batch_size, seed);
  ConvergenceTrace tr;
  for (std::uint64_t t = 0; t < T; ++t) {
    const Evaluation full = eval(l, x);
    tr.loss.push_back(full.value);
    tr.grad_l2.push_back(l2_norm(full.grad));
    tr.grad_phi.push_back(phi_pseudo_norm(full.grad));
    const BlockedVector g = sampler ? l.evaluate_batch(x, sampler->next()).grad : full.grad;
    const BlockedVector c = centralize_enabled ? centralize(g) : g;
    for (std::size_t k = 0; k < c.block_count(); ++k) {
      const double n = block_l2_norm(c, k);
      if (n == 0.0) continue;
      auto xk = x.block(k);
      const auto ck = c.block(k);
      for (std::size_t i = 0; i < xk.size(); ++i) xk[i] -= eta * (ck[i] / n);
    }
  }
  return tr;
}

// sigma^2 estimate: mean over samples of ||grad f_i(x) - grad F(x)||^2.
inline double estimate_gradient_variance(const Landscape& l, const BlockedVector& x) {
  const std::size_t n = l.sample_count();
  if (n == 0) throw UsageError("estimate_gradient_variance: landscape has no samples");
  const BlockedVector full = l.evaluate(x).grad;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx[1] = {i};
    const BlockedVector gi = l.evaluate_batch(x, idx).grad;
    double s = 0.0;
    for (std::size_t j = 0; j < gi.size(); ++j) s += (gi[j] - full[j]) * (gi[j] - full[j]);
    total += s;
  }
  return total / static_cast<double>(n);
}

// Empirical smoothness: max ||grad F(x) - grad F(y)|| / ||x - y|| over pairs
// with x uniform-ish in a ball around `center` and y close to x. A lower
// bound on the true constant, reported as an estimate.
inline double estimate_lipschitz(const Landscape& l, const BlockedVector& center, double radius, std::size_t pairs,
                                 std::uint64_t seed) {
  Rng rng(seed);
  auto random_dir = [&] {
    BlockedVector u = center.zeros_like();
    for (double& v : u.values()) v = rng.normal();
    return scale(u, 1.0 / l2_norm(u));
  };
  double best = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const BlockedVector x = axpy(center, radius * rng.uniform(), random_dir());
    const BlockedVector y = axpy(x, 0.1 * radius * rng.uniform(0.01, 1.0), random_dir());
    const double num = l2_norm(subtract(l.evaluate(x).grad, l.evaluate(y).grad));
    best = std::max(best, num / l2_norm(subtract(x, y)));
  }
  return best;
}

}  // namespace sing
