#pragma once

// Training loop that produces RunTraces, landscape construction from an
// ExperimentConfig, and the three-minima escape experiment.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/config.hpp"
#include "sing/errors.hpp"
#include "sing/landscapes.hpp"
#include "sing/mlp.hpp"
#include "sing/optimizers.hpp"
#include "sing/theory.hpp"
#include "sing/trace.hpp"

namespace sing {

struct RunOptions {
  std::size_t batch_size = 0;  // 0 = exact gradient
  std::uint64_t seed = 0;
  bool record_full_loss = false;
  bool record_iterates = false;
};

struct RunResult {
  RunTrace trace;
  BlockedVector final_params;
  std::vector<double> full_loss;          // F(x_t), when requested
  std::vector<BlockedVector> iterates;    // x_0 .. x_T, when requested
};

// Runs schedule.total_steps steps from x0. A NumericError (non-finite loss,
// gradient or parameters) stops the run and marks the trace diverged; the
// records so far are kept.
inline RunResult run_training(const Landscape& l, BlockedVector x0, const SingPipelineConfig& cfg,
                              const Schedule& sched, const RunOptions& opt = {}) {
  cfg.validate();
  sched.validate();
  RunResult res{RunTrace{}, x0, {}, {}};
  res.trace.seed = opt.seed;
  res.trace.partition = l.partition();
  OptimizerState state(x0);
  std::optional<BatchSampler> sampler;
  if (opt.batch_size > 0) sampler.emplace(l.sample_count(), opt.batch_size, opt.seed);
  BlockedVector x = std::move(x0);
  if (opt.record_iterates) res.iterates.push_back(x);
  for (std::uint64_t t = 0; t < sched.total_steps; ++t) {
    try {
      if (opt.record_full_loss) res.full_loss.push_back(eval(l, x).value);
      Evaluation e = sampler ? l.evaluate_batch(x, sampler->next()) : l.evaluate(x);
      if (!std::isfinite(e.value)) throw NumericError("non-finite loss", "step " + std::to_string(t));
      if (!e.grad.all_finite()) throw NumericError("non-finite gradient", "step " + std::to_string(t));
      StepRecord rec;
      rec.step = t;
      rec.lr = lr_at(sched, t);
      rec.loss = e.value;
      rec.grad_l2 = l2_norm(e.grad);
      rec.grad_phi = phi_pseudo_norm(e.grad);
      rec.param_mean = global_mean(x);
      rec.block_norms = block_l2_norms(e.grad);
      BlockedVector next = step(x, e.grad, state, cfg, sched);
      rec.update_l2 = l2_norm(subtract(next, x));
      res.trace.records.push_back(std::move(rec));
      x = std::move(next);
      if (opt.record_iterates) res.iterates.push_back(x);
    } catch (const NumericError& err) {
      res.trace.diverged = true;
      res.trace.diverged_reason = err.what();
      break;
    }
  }
  res.final_params = std::move(x);
  return res;
}

struct BuiltLandscape {
  std::shared_ptr<const Landscape> landscape;
  BlockedVector x0;
  std::size_t batch_size = 0;
};

// "w:2x3,b:3" -> partition
inline PartitionPtr parse_inline_blocks(const std::string& spec) {
  std::vector<BlockSpec> blocks;
  for (const auto& item : detail::split(spec, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("landscape.blocks: expected name:shape, got '" + item + "'");
    try {
      blocks.push_back({item.substr(0, colon), BlockPartition::parse_shape(item.substr(colon + 1))});
    } catch (const UsageError& e) {
      throw ConfigError(std::string("landscape.blocks: ") + e.what());
    }
  }
  try {
    return BlockPartition::make(std::move(blocks));
  } catch (const UsageError& e) {
    throw ConfigError(std::string("landscape.blocks: ") + e.what());
  }
}

inline BlockedVector broadcast_x0(const PartitionPtr& part, const std::vector<double>& x0, BlockedVector fallback) {
  if (x0.empty()) return fallback;
  if (x0.size() == 1) {
    BlockedVector x(part);
    for (double& v : x.values()) v = x0[0];
    return x;
  }
  if (x0.size() != part->size())
    throw ConfigError("landscape.x0 has " + std::to_string(x0.size()) + " values, landscape needs " +
                      std::to_string(part->size()));
  return BlockedVector(part, x0);
}

inline BuiltLandscape build_landscape(const ExperimentConfig& cfg) {
  const auto& Lc = cfg.landscape;
  std::shared_ptr<const Landscape> base;
  BlockedVector fallback(BlockPartition::make({{"x", {1}}}));
  std::size_t batch = 0;
  switch (Lc.kind) {
    case LandscapeKind::Quadratic: {
      auto part = parse_inline_blocks(Lc.blocks);
      base = std::make_shared<Quadratic>(part, Lc.L);
      fallback = BlockedVector(part, std::vector<double>(part->size(), 1.0));
      break;
    }
    case LandscapeKind::Rosenbrock: {
      auto r = std::make_shared<Rosenbrock>();
      fallback = BlockedVector(r->partition(), {-1.2, 1.0});
      base = r;
      break;
    }
    case LandscapeKind::Wells: {
      auto w = std::make_shared<GaussianWells1D>(GaussianWells1D::standard());
      fallback = BlockedVector(w->partition(), {-4.2});
      base = w;
      break;
    }
    case LandscapeKind::Mlp: {
      if (Lc.data_n < Lc.data_classes || Lc.data_classes < 2) throw ConfigError("data: need n >= classes >= 2");
      auto task = std::make_shared<MlpTask>(
          make_blobs(cfg.seed, Lc.data_n, Lc.data_classes, Lc.data_dim, Lc.data_spread), Lc.hidden, Lc.bias);
      fallback = task->initial_parameters(cfg.seed);
      if (Lc.batch_size > Lc.data_n) throw ConfigError("mlp.batch_size exceeds data.n");
      batch = Lc.batch_size;
      base = task;
      break;
    }
  }
  // MLP parameters always come from the seeded initializer.
  BlockedVector x0 = Lc.kind == LandscapeKind::Mlp ? fallback : broadcast_x0(base->partition(), Lc.x0, fallback);
  if (Lc.loss_scale != 1.0) base = std::make_shared<ScaledLandscape>(base, Lc.loss_scale);
  return {base, std::move(x0), batch};
}

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const BuiltLandscape built = build_landscape(cfg);
  RunOptions opt;
  opt.batch_size = built.batch_size;
  opt.seed = cfg.seed;
  RunResult res = run_training(*built.landscape, built.x0, cfg.pipeline, cfg.schedule, opt);
  res.trace.config_snapshot = cfg.snapshot();
  return res;
}

// --- three-minima escape experiment ---------------------------------------

struct EscapeDemoOptions {
  double x0 = -4.2;
  std::uint64_t total_steps = 1000;
  std::vector<double> sgd_lr_grid = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  // Base step size of the standardized run; <= 0 means 2 * max narrow radius.
  double sing_base_lr = 0.0;
};

struct WellSummary {
  double minimizer;
  double radius;
  double value;
};

struct EscapeDemoResult {
  GaussianWells1D landscape;
  std::vector<WellSummary> narrow;  // in order of increasing x
  WellSummary wide;
  double sing_base_lr;
  RunResult sing;
  double sgd_best_lr;
  RunResult sgd;
  std::vector<std::pair<double, double>> sgd_grid_final;  // (lr, final loss)
  double sing_final_x() const { return sing.final_params[0]; }
  double sgd_final_x() const { return sgd.final_params[0]; }
};

// Wells whose width is below `narrow_width` count as narrow. Each minimizer
// is refined by Newton from the well centre and its basin radius estimated.
inline std::vector<WellSummary> analyse_wells(const GaussianWells1D& l, double narrow_width, bool want_narrow) {
  std::vector<WellSummary> out;
  for (const auto& w : l.wells()) {
    if ((w.width < narrow_width) != want_narrow) continue;
    BlockedVector guess(l.partition(), {w.center});
    const BlockedVector xs = locate_critical_point(l, guess);
    out.push_back({xs[0], estimate_basin_radius(l, xs), l.value_at(xs[0])});
  }
  return out;
}

inline RunResult run_wells(const GaussianWells1D& l, double x0, double base_lr, std::uint64_t steps, bool standardize) {
  SingPipelineConfig cfg;
  cfg.standardize = StandardizeConfig{false, standardize, 0.0};
  const Schedule sched{ScheduleKind::Cosine, base_lr, 0, steps};
  RunOptions opt;
  opt.record_iterates = true;
  return run_training(l, BlockedVector(l.partition(), {x0}), cfg, sched, opt);
}

inline EscapeDemoResult run_escape_demo(const EscapeDemoOptions& opt = {}) {
  const GaussianWells1D l = GaussianWells1D::standard();
  const auto narrow = analyse_wells(l, 0.5, true);
  const auto wide = analyse_wells(l, 0.5, false);
  if (narrow.empty() || wide.empty()) throw UsageError("escape demo needs narrow and wide wells");
  double rmax = 0.0;
  for (const auto& w : narrow) rmax = std::max(rmax, w.radius);
  const double sing_lr = opt.sing_base_lr > 0.0 ? opt.sing_base_lr : 2.0 * rmax;
  RunResult sing = run_wells(l, opt.x0, sing_lr, opt.total_steps, true);
  std::optional<RunResult> best;
  double best_f = std::numeric_limits<double>::infinity(), best_lr = 0.0;
  std::vector<std::pair<double, double>> grid;
  for (double lr : opt.sgd_lr_grid) {
    RunResult r = run_wells(l, opt.x0, lr, opt.total_steps, false);
    const double f = l.value_at(r.final_params[0]);
    grid.emplace_back(lr, f);
    if (f < best_f) {
      best_f = f;
      best_lr = lr;
      best = std::move(r);
    }
  }
  if (!best) throw UsageError("escape demo needs a non-empty SGD learning-rate grid");
  return {l, narrow, wide.front(), sing_lr, std::move(sing), best_lr, std::move(*best), std::move(grid)};
}

}  // namespace sing
