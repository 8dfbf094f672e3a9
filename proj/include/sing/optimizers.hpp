#pragma once

// Host optimizers, stabilizers and learning-rate schedules, plus the full
// standardized step:
//
//   g'     = standardize(g)
//   p      = p * (1 - lr * wd)          (non-skipped blocks only)
//   update = host(g')
//   p      = p - lr * update
//   p      = lookahead(p)               (every k steps)

#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"
#include "sing/standardize.hpp"

namespace sing {

enum class HostKind { SGD, NGD, AdamW, AdaBelief };

inline const char* to_string(HostKind k) {
  switch (k) {
    case HostKind::SGD: return "sgd";
    case HostKind::NGD: return "ngd";
    case HostKind::AdamW: return "adamw";
    case HostKind::AdaBelief: return "adabelief";
  }
  return "?";
}

inline HostKind parse_host_kind(const std::string& s) {
  if (s == "sgd") return HostKind::SGD;
  if (s == "ngd") return HostKind::NGD;
  if (s == "adamw") return HostKind::AdamW;
  if (s == "adabelief") return HostKind::AdaBelief;
  throw ConfigError("unknown optimizer kind '" + s + "' (expected sgd, ngd, adamw, adabelief)");
}

struct HostOptimizerConfig {
  HostKind kind = HostKind::SGD;
  double momentum = 0.0;  // SGD only
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_opt = 1e-8;
  bool softplus_enabled = false;
  double softplus_beta = 50.0;

  void validate() const {
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("optimizer.momentum must be in [0, 1)");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("optimizer.beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("optimizer.beta2 must be in [0, 1)");
    if (!(eps_opt > 0.0)) throw ConfigError("optimizer.eps must be > 0");
    if (!(softplus_beta > 0.0)) throw ConfigError("optimizer.softplus_beta must be > 0");
  }
};

struct LookAheadConfig {
  bool enabled = false;
  std::uint64_t k = 5;
  double alpha = 0.5;

  void validate() const {
    if (k < 1) throw ConfigError("lookahead.k must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("lookahead.alpha must be in (0, 1]");
  }
};

enum class ScheduleKind { Constant, Cosine };

struct Schedule {
  ScheduleKind kind = ScheduleKind::Cosine;
  double base_lr = 1e-2;
  std::uint64_t warmup_steps = 0;
  std::uint64_t total_steps = 100;

  void validate() const {
    if (!(base_lr > 0.0)) throw ConfigError("schedule.base_lr must be > 0");
    if (total_steps == 0) throw ConfigError("schedule.total_steps must be > 0");
    if (warmup_steps >= total_steps) throw ConfigError("schedule.warmup_steps must be < total_steps");
  }
};

inline double lr_at(const Schedule& s, std::uint64_t t) {
  if (t >= s.total_steps)
    throw UsageError("lr_at: step " + std::to_string(t) + " outside [0, " + std::to_string(s.total_steps) + ")");
  if (t < s.warmup_steps)
    return s.base_lr * static_cast<double>(t + 1) / static_cast<double>(s.warmup_steps);
  if (s.kind == ScheduleKind::Constant) return s.base_lr;
  const double span = static_cast<double>(s.total_steps - s.warmup_steps);
  const double progress = static_cast<double>(t - s.warmup_steps) / span;
  return s.base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

struct SingPipelineConfig {
  StandardizeConfig standardize;
  HostOptimizerConfig host;
  LookAheadConfig lookahead;
  double weight_decay = 0.0;
  std::set<std::string> weight_decay_skip;

  void validate() const {
    standardize.validate();
    host.validate();
    lookahead.validate();
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  }
};

struct OptimizerState {
  std::uint64_t t = 0;
  BlockedVector m;
  BlockedVector v;
  BlockedVector slow_weights;

  // Moments start at zero; slow weights start at the initial parameters.
  explicit OptimizerState(const BlockedVector& params)
      : m(params.zeros_like()), v(params.zeros_like()), slow_weights(params) {}
};

// (1/beta) * ln(1 + exp(beta * x)), evaluated without overflow.
inline double softplus(double x, double beta) {
  const double z = beta * x;
  if (z > 0.0) return x + std::log1p(std::exp(-z)) / beta;
  return std::log1p(std::exp(z)) / beta;
}

inline BlockedVector apply_weight_decay(const BlockedVector& p, double lr, const SingPipelineConfig& cfg) {
  if (cfg.weight_decay == 0.0) return p;
  const double factor_drop = lr * cfg.weight_decay;
  if (factor_drop >= 1.0)
    throw ConfigError("lr * weight_decay = " + std::to_string(factor_drop) + " >= 1 flips parameter signs");
  const double factor = 1.0 - factor_drop;
  BlockedVector out = p;
  const auto& part = p.partition();
  for (std::size_t k = 0; k < part.block_count(); ++k) {
    if (cfg.weight_decay_skip.count(part.block(k).name)) continue;
    for (double& x : out.block(k)) x *= factor;
  }
  return out;
}

// Computes the update direction (to be scaled by lr and subtracted) and
// advances the step counter.
inline BlockedVector host_update(const BlockedVector& g, OptimizerState& state, const HostOptimizerConfig& cfg) {
  if (!g.same_partition(state.m)) throw UsageError("host_update: gradient/state partition mismatch");
  ++state.t;
  BlockedVector update = g.zeros_like();
  switch (cfg.kind) {
    case HostKind::SGD: {
      if (cfg.momentum == 0.0) return g;
      // m doubles as the momentum buffer: b <- mu * b + g
      for (std::size_t i = 0; i < g.size(); ++i) state.m[i] = cfg.momentum * state.m[i] + g[i];
      return state.m;
    }
    case HostKind::NGD: {
      const double n = l2_norm(g);
      if (n == 0.0) throw NumericError("normalized step with zero gradient");
      return scale(g, 1.0 / n);
    }
    case HostKind::AdamW:
    case HostKind::AdaBelief: {
      const double t = static_cast<double>(state.t);
      const double bc1 = 1.0 - std::pow(cfg.beta1, t);
      const double bc2 = 1.0 - std::pow(cfg.beta2, t);
      const bool belief = cfg.kind == HostKind::AdaBelief;
      for (std::size_t i = 0; i < g.size(); ++i) {
        double& m = state.m[i];
        double& v = state.v[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g[i];
        const double r = belief ? g[i] - m : g[i];
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * r * r;
        const double m_hat = m / bc1;
        const double root = std::sqrt(v / bc2);
        const double denom = cfg.softplus_enabled ? softplus(root, cfg.softplus_beta) : root + cfg.eps_opt;
        update[i] = m_hat / denom;
      }
      return update;
    }
  }
  return update;
}

// Every k-th step (by state.t) pull the slow weights toward the fast weights
// and reset the fast weights onto them.
inline BlockedVector lookahead_step(const BlockedVector& fast, OptimizerState& state, const LookAheadConfig& cfg) {
  if (state.t == 0 || state.t % cfg.k != 0) return fast;
  for (std::size_t i = 0; i < fast.size(); ++i)
    state.slow_weights[i] += cfg.alpha * (fast[i] - state.slow_weights[i]);
  return state.slow_weights;
}

// Gradient after standardization, as consumed by the host optimizer.
inline BlockedVector standardized_gradient(const BlockedVector& g, const StandardizeConfig& cfg) {
  if (!cfg.centralize_enabled && !cfg.normalize_enabled) return g;
  return sing_transform(g, cfg);
}

inline BlockedVector step(const BlockedVector& p, const BlockedVector& g, OptimizerState& state,
                          const SingPipelineConfig& cfg, const Schedule& sched) {
  if (!p.same_partition(g)) throw UsageError("step: parameter/gradient partition mismatch");
  const double lr = lr_at(sched, state.t);
  const BlockedVector gs = standardized_gradient(g, cfg.standardize);
  BlockedVector next = apply_weight_decay(p, lr, cfg);
  const BlockedVector update = host_update(gs, state, cfg.host);
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= lr * update[i];
  if (cfg.lookahead.enabled) next = lookahead_step(next, state, cfg.lookahead);
  if (!next.all_finite()) throw NumericError("non-finite parameters after step", "t=" + std::to_string(state.t));
  return next;
}

}  // namespace sing
