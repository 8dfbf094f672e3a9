#pragma once

// Property suites run by `sing check <suite>`. Each check reports a measured
// quantity (lhs) against a bound or tolerance (rhs) and passes iff lhs <= rhs.
//
// The standardization under test is injectable so that a deliberately broken
// operator can be used to confirm the suites detect faults.

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/experiment.hpp"
#include "sing/landscapes.hpp"
#include "sing/mlp.hpp"
#include "sing/optimizers.hpp"
#include "sing/rng.hpp"
#include "sing/standardize.hpp"
#include "sing/theory.hpp"
#include "sing/trace.hpp"

namespace sing {

struct CheckRecord {
  std::string suite;
  std::string check;
  double lhs;
  double rhs;
  bool pass;
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"suite", suite}, {"check", check}, {"lhs", lhs}, {"rhs", rhs}, {"pass", pass}, {"params", params}};
  }
};

using TransformFn = std::function<BlockedVector(const BlockedVector&, const StandardizeConfig&)>;

struct CheckOptions {
  TransformFn transform = [](const BlockedVector& g, const StandardizeConfig& c) { return sing_transform(g, c); };
  std::uint64_t seed = 2024;
};

// Fault model for mutation testing: every block is divided by the norm of the
// following block instead of its own.
inline BlockedVector broken_gamma_transform(const BlockedVector& g, const StandardizeConfig& cfg) {
  BlockedVector c = cfg.centralize_enabled ? centralize(g) : g;
  if (!cfg.normalize_enabled) return c;
  const std::size_t D = c.block_count();
  const auto norms = block_l2_norms(c);
  for (std::size_t k = 0; k < D; ++k)
    for (double& x : c.block(k)) x /= norms[(k + 1) % D] + cfg.epsilon;
  return c;
}

// Random partition with D blocks of rank 1..3. Trailing dimensions of rank>1
// blocks multiply to at least 2 so centralization does not annihilate them.
inline PartitionPtr random_partition(Rng& rng, std::size_t D) {
  std::vector<BlockSpec> blocks;
  for (std::size_t k = 0; k < D; ++k) {
    const std::size_t rank = 1 + rng.below(3);
    std::vector<std::size_t> shape;
    if (rank == 1) {
      shape.push_back(1 + rng.below(8));
    } else {
      shape.push_back(1 + rng.below(5));
      for (std::size_t r = 1; r < rank; ++r) shape.push_back(1 + rng.below(4));
      if (shape.back() == 1) shape.back() = 2;
    }
    blocks.push_back({"t" + std::to_string(k), shape});
  }
  return BlockPartition::make(std::move(blocks));
}

// Entries are normal with a per-block scale spanning several decades.
inline BlockedVector random_blocked_vector(const PartitionPtr& part, Rng& rng) {
  BlockedVector v(part);
  for (std::size_t k = 0; k < v.block_count(); ++k) {
    const double s = std::pow(10.0, rng.uniform(-3.0, 3.0));
    for (double& x : v.block(k)) x = s * rng.normal();
  }
  return v;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double max_abs_diff(const BlockedVector& a, const BlockedVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace detail {
struct Recorder {
  std::string suite;
  std::vector<CheckRecord>& out;
  void operator()(const std::string& check, double lhs, double rhs, nlohmann::json params = nlohmann::json::object()) {
    out.push_back({suite, check, lhs, rhs, lhs <= rhs, std::move(params)});
  }
};

inline std::shared_ptr<MlpTask> default_mlp(std::uint64_t seed, std::size_t n = 2000, bool bias = true) {
  return std::make_shared<MlpTask>(make_blobs(seed, n, 3, 2, 0.3), 16, bias);
}
}  // namespace detail

inline void suite_lemmas(std::vector<CheckRecord>& out, const CheckOptions& opt) {
  detail::Recorder rec{"lemmas", out};
  Rng rng(opt.seed);
  const StandardizeConfig plain{false, true, 0.0}, full{true, true, 0.0};
  double e1 = 0, e2 = 0, e2b = 0, e3 = 0, e4 = 0, e4a = 0, e4b = 0, eN = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t D = 1 + static_cast<std::size_t>(trial % 16);
    const auto part = random_partition(rng, D);
    const BlockedVector g = random_blocked_vector(part, rng);
    const double sqrtD = std::sqrt(static_cast<double>(D));
    const BlockedVector u = opt.transform(g, plain);
    const double N = structured_norm(g);
    e1 = std::max(e1, rel_diff(l2_norm(u), sqrtD));
    e2 = std::max(e2, rel_diff(dot(g, u), N));
    e2b = std::max(e2b, (l2_norm(g) - N) / N);
    double sum_blocks = 0.0;
    for (std::size_t k = 0; k < D; ++k) sum_blocks += block_l2_norm(g, k);
    eN = std::max(eN, std::abs(N - sum_blocks) / N);
    const BlockedVector w = opt.transform(g, full);
    e3 = std::max(e3, rel_diff(l2_norm(w), sqrtD));
    const double Nphi = structured_phi_norm(g);
    e4 = std::max(e4, rel_diff(dot(g, w), Nphi));
    const double gphi = phi_pseudo_norm(g), g2 = l2_norm(g);
    e4a = std::max(e4a, (gphi - g2) / g2);
    e4b = std::max(e4b, (gphi - Nphi) / Nphi);
  }
  const nlohmann::json p = {{"vectors", 1000}, {"D", "1..16"}, {"epsilon", 0.0}};
  rec("block_unit_norm_total_sqrtD", e1, 1e-10, p);
  rec("inner_product_equals_structured_norm", e2, 1e-10, p);
  rec("l2_norm_le_structured_norm", e2b, 1e-15, p);
  rec("structured_norm_matches_block_sum", eN, 1e-12, p);
  rec("centralized_unit_norm_total_sqrtD", e3, 1e-10, p);
  rec("centralized_inner_product_equals_phi_structured_norm", e4, 1e-9, p);
  rec("phi_norm_le_l2_norm", e4a, 1e-15, p);
  rec("phi_norm_le_phi_structured_norm", e4b, 1e-15, p);

  // Projector properties of centralization.
  double lin = 0, idem = 0, adj = 0, pyth = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto part = random_partition(rng, 1 + rng.below(16));
    const BlockedVector x = random_blocked_vector(part, rng), y = random_blocked_vector(part, rng);
    const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
    const BlockedVector lhs = centralize(axpy(scale(x, a), b, y));
    const BlockedVector rhs = axpy(scale(centralize(x), a), b, centralize(y));
    lin = std::max(lin, l2_norm(subtract(lhs, rhs)) / (std::abs(a) * l2_norm(x) + std::abs(b) * l2_norm(y)));
    const BlockedVector cx = centralize(x);
    idem = std::max(idem, l2_norm(subtract(centralize(cx), cx)) / l2_norm(x));
    adj = std::max(adj, std::abs(dot(cx, y) - dot(x, centralize(y))) / (l2_norm(x) * l2_norm(y)));
    const double ph = phi_pseudo_norm(x), res = l2_norm(subtract(x, cx)), nx = l2_norm(x);
    pyth = std::max(pyth, std::abs(ph * ph + res * res - nx * nx) / (nx * nx));
  }
  rec("centralize_linear", lin, 1e-12, {{"vectors", 500}});
  rec("centralize_idempotent", idem, 1e-12, {{"vectors", 500}});
  rec("centralize_self_adjoint", adj, 1e-12, {{"vectors", 500}});
  rec("phi_pythagoras", pyth, 1e-10, {{"vectors", 500}});

  // Reading a block and writing it back is bit-identical.
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto part = random_partition(rng, 1 + rng.below(16));
    BlockedVector v = random_blocked_vector(part, rng);
    const BlockedVector before = v;
    for (std::size_t k = 0; k < v.block_count(); ++k) {
      const auto blk = v.block(k);
      std::vector<double> copy(blk.begin(), blk.end());
      v.set_block(k, copy);
    }
    for (std::size_t i = 0; i < v.size(); ++i) mismatches += std::bit_cast<std::uint64_t>(v[i]) != std::bit_cast<std::uint64_t>(before[i]);
    mismatches += !(*BlockPartition::parse_manifest(part->manifest()) == *part);
  }
  rec("partition_round_trip", static_cast<double>(mismatches), 0.0, {{"partitions", 100}});
}

inline void suite_invariance(std::vector<CheckRecord>& out, const CheckOptions& opt) {
  detail::Recorder rec{"invariance", out};
  Rng rng(opt.seed + 1);

  // Objective rescaling leaves the iterates unchanged.
  {
    const auto task = detail::default_mlp(0, 600);
    const BlockedVector x0 = task->initial_parameters(0);
    const Schedule sched{ScheduleKind::Cosine, 0.05, 10, 200};
    for (HostKind host : {HostKind::SGD, HostKind::AdamW}) {
      SingPipelineConfig cfg;
      cfg.standardize = {true, true, 0.0};
      cfg.host.kind = host;
      RunOptions ro;
      ro.batch_size = 50;
      ro.seed = 3;
      ro.record_iterates = true;
      const RunResult ref = run_training(*task, x0, cfg, sched, ro);
      for (double alpha : {1e-3, 1e3}) {
        const ScaledLandscape scaled(task, alpha);
        const RunResult r = run_training(scaled, x0, cfg, sched, ro);
        double worst = 0.0;
        for (std::size_t t = 0; t < ref.iterates.size(); ++t)
          worst = std::max(worst, relative_error(r.iterates[t], ref.iterates[t]));
        rec("loss_scale_invariance", worst, 1e-9, {{"alpha", alpha}, {"host", to_string(host)}, {"steps", 200}});
      }
    }
  }

  // Mean preservation on a model whose blocks are all rank 2.
  {
    const auto task = detail::default_mlp(1, 600, false);
    SingPipelineConfig cfg;
    cfg.standardize = {true, true, 0.0};
    const Schedule sched{ScheduleKind::Constant, 0.05, 0, 300};
    RunOptions ro;
    ro.record_iterates = true;
    const RunResult r = run_training(*task, task->initial_parameters(1), cfg, sched, ro);
    const double m0 = global_mean(r.iterates.front());
    double drift = 0.0, slice = 0.0;
    for (std::size_t t = 0; t + 1 < r.iterates.size(); ++t) {
      drift = std::max(drift, std::abs(global_mean(r.iterates[t + 1]) - m0));
      const BlockedVector du = subtract(r.iterates[t + 1], r.iterates[t]);
      for (std::size_t k = 0; k < du.block_count(); ++k)
        for (double s : slice_sums(du, k)) slice = std::max(slice, std::abs(s));
    }
    rec("global_mean_preserved", drift, 1e-10, {{"steps", 300}});
    rec("per_slice_update_sums_zero", slice, 1e-12, {{"steps", 300}});
  }

  // Per-block positive rescaling (clipping) is cancelled by normalization.
  {
    double exact = 0.0, approx = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
      const auto part = random_partition(rng, 1 + rng.below(12));
      const BlockedVector g = random_blocked_vector(part, rng);
      BlockedVector h = g;
      for (std::size_t k = 0; k < h.block_count(); ++k) {
        const double c = std::pow(10.0, rng.uniform(-4, 4));
        for (double& x : h.block(k)) x *= c;
      }
      exact = std::max(exact, max_abs_diff(opt.transform(g, {true, true, 0.0}), opt.transform(h, {true, true, 0.0})));
      // The eps > 0 gap is about eps / ||g_k||: compare blocks with norms in [1e-2, 1e3].
      BlockedVector a = g, b = g;
      for (std::size_t k = 0; k < g.block_count(); ++k) {
        const double n = block_l2_norm(g, k);
        const double sa = std::pow(10.0, rng.uniform(-2, 3)) / n, sb = std::pow(10.0, rng.uniform(-2, 3)) / n;
        for (double& x : a.block(k)) x *= sa;
        for (double& x : b.block(k)) x *= sb;
      }
      approx = std::max(approx, max_abs_diff(opt.transform(a, {false, true, 1e-8}), opt.transform(b, {false, true, 1e-8})));
    }
    rec("clipping_invariance_eps0", exact, 1e-14, {{"vectors", 300}});
    rec("clipping_invariance_eps1e-8", approx, 1e-6, {{"vectors", 300}});
  }

  // With stabilizers off and an SGD host, step() is the bare iterate formula.
  {
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto part = random_partition(rng, 1 + rng.below(8));
      const BlockedVector p = random_blocked_vector(part, rng), g = random_blocked_vector(part, rng);
      const double eps = trial % 2 ? 0.0 : 1e-8;
      SingPipelineConfig cfg;
      cfg.standardize = {true, true, eps};
      const Schedule sched{ScheduleKind::Constant, 0.1, 0, 10};
      OptimizerState st(p);
      const BlockedVector got = step(p, g, st, cfg, sched);
      const BlockedVector c = centralize(g);
      BlockedVector want = p;
      for (std::size_t k = 0; k < c.block_count(); ++k) {
        const double n = block_l2_norm(c, k) + eps;
        auto w = want.block(k);
        auto ck = c.block(k);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - 0.1 * (ck[i] / n);
      }
      for (std::size_t i = 0; i < p.size(); ++i) mismatches += std::bit_cast<std::uint64_t>(got[i]) != std::bit_cast<std::uint64_t>(want[i]);
    }
    rec("reduction_to_iterate_formula", static_cast<double>(mismatches), 0.0, {{"cases", 200}});
  }

  // Same config, same gradients: identical traces.
  {
    ExperimentConfig cfg;
    cfg.landscape.kind = LandscapeKind::Mlp;
    cfg.landscape.data_n = 300;
    cfg.landscape.batch_size = 30;
    cfg.pipeline.host.kind = HostKind::AdamW;
    cfg.pipeline.lookahead.enabled = true;
    cfg.schedule = {ScheduleKind::Cosine, 0.01, 5, 80};
    std::ostringstream a, b;
    write_trace(a, run_experiment(cfg).trace);
    write_trace(b, run_experiment(cfg).trace);
    rec("run_determinism", a.str() == b.str() ? 0.0 : 1.0, 0.0, {{"steps", 80}});
  }
}

inline void suite_escape(std::vector<CheckRecord>& out, const CheckOptions& opt) {
  detail::Recorder rec{"escape", out};
  (void)opt;
  {
    double worst = 0.0;
    for (std::size_t D = 1; D <= 64; ++D) {
      const auto th = escape_thresholds(0.37, 1.0, D);
      worst = std::max(worst, th.eta_sing - th.eta_ngd);
      worst = std::max(worst, std::abs(th.eta_sing * std::sqrt(static_cast<double>(D)) - th.eta_ngd));
    }
    rec("threshold_ordering", worst, 1e-15, {{"D", "1..64"}});
  }
  const auto wells = GaussianWells1D::standard();
  for (const auto& w : analyse_wells(wells, 0.5, true)) {
    const BlockedVector xs(wells.partition(), {w.minimizer});
    const double eta = 1.05 * escape_thresholds(w.radius, 1.0, 1).eta_sing;
    const auto sing = single_step_escape_check(wells, xs, w.radius, eta, StepMethod::SING);
    const nlohmann::json p = {{"minimizer", w.minimizer}, {"radius", w.radius}, {"eta", eta}, {"points", 1000}};
    rec("sing_single_step_escapes", static_cast<double>(sing.tested - sing.escaped), 0.0, p);
    const auto gd = single_step_escape_check(wells, xs, w.radius, eta, StepMethod::GD);
    const EscapeSample *flat = nullptr, *near = nullptr;
    for (const auto& s : gd.samples) {
      if (s.skipped) continue;
      if (!flat || s.grad_norm < flat->grad_norm) flat = &s;
      if (!near || std::abs(s.start[0] - w.minimizer) < std::abs(near->start[0] - w.minimizer)) near = &s;
    }
    rec("gd_flattest_start_stays", flat && !flat->escaped ? 0.0 : 1.0, 0.0, p);
    rec("gd_near_minimum_stays", near && !near->escaped ? 0.0 : 1.0, 0.0, p);
    const auto still = single_step_escape_check(wells, xs, w.radius, 0.0, StepMethod::SING);
    rec("zero_step_never_escapes", static_cast<double>(still.escaped), 0.0, p);
  }
}

inline void suite_convergence(std::vector<CheckRecord>& out, const CheckOptions& opt) {
  detail::Recorder rec{"convergence", out};
  Rng rng(opt.seed + 2);
  for (std::size_t D : {1, 4}) {
    std::vector<BlockSpec> blocks;
    for (std::size_t k = 0; k < D; ++k) blocks.push_back({"w" + std::to_string(k), {2, 3}});
    const auto part = BlockPartition::make(blocks);
    const Quadratic q(part, 2.0);
    BlockedVector x0 = random_blocked_vector(part, rng);
    x0 = scale(x0, 1.0 / l2_norm(x0));  // F(x0) = 1
    const ConvergenceRecipe recipe{0.05, 2.0, 1.0, 0.0, D};
    for (NormMode mode : {NormMode::L2, NormMode::Phi}) {
      const auto tr = run_for_audit(q, x0, recipe.eta(), recipe.T(), mode == NormMode::Phi);
      const auto a = convergence_audit(tr, recipe, mode);
      const nlohmann::json p = {{"landscape", "quadratic"}, {"D", D}, {"mode", mode == NormMode::L2 ? "l2" : "phi"},
                                {"eta", recipe.eta()}, {"T", recipe.T()}};
      rec("bound_full", a.lhs, a.rhs, p);
      rec("bound_simplified", a.lhs, a.simplified_rhs, p);
    }
  }
  {
    const auto task = detail::default_mlp(0);
    const BlockedVector x0 = task->initial_parameters(0);
    const double F0 = task->evaluate(x0).value;
    const double sigma2 = estimate_gradient_variance(*task, x0);
    const double L = estimate_lipschitz(*task, x0, 1.0, 200, 11);
    ConvergenceRecipe recipe{0.05, L, F0, std::sqrt(sigma2), task->partition()->block_count()};
    const std::size_t B = std::min<std::size_t>(recipe.B(), task->sample_count());
    for (NormMode mode : {NormMode::L2, NormMode::Phi}) {
      const auto tr = run_for_audit(*task, x0, recipe.eta(), recipe.T(), mode == NormMode::Phi, B, 5);
      const auto a = convergence_audit(tr, recipe, mode);
      rec("bound_full_stochastic", a.lhs, a.rhs,
          {{"landscape", "mlp"}, {"mode", mode == NormMode::L2 ? "l2" : "phi"}, {"sigma2_hat", sigma2},
           {"L_hat", L}, {"B", B}, {"T", recipe.T()}, {"eta", recipe.eta()}});
    }
  }
}

inline void suite_gradients(std::vector<CheckRecord>& out, const CheckOptions& opt) {
  detail::Recorder rec{"gradients", out};
  Rng rng(opt.seed + 3);
  auto fd_check = [&](const Landscape& l, const std::string& name, double tol, auto sample_point) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const BlockedVector x = sample_point();
      worst = std::max(worst, relative_error(l.evaluate(x).grad, fd_gradient(l, x, 1e-5)));
    }
    rec("fd_match_" + name, worst, tol, {{"points", 100}, {"h", 1e-5}});
  };
  const auto qpart = BlockPartition::make({{"w", {3, 2}}, {"b", {3}}});
  const Quadratic quad(qpart, 3.0);
  fd_check(quad, "quadratic", 1e-6, [&] { return random_blocked_vector(qpart, rng); });
  const Rosenbrock rosen;
  fd_check(rosen, "rosenbrock", 1e-6, [&] {
    return BlockedVector(rosen.partition(), {rng.uniform(-2, 2), rng.uniform(-1, 3)});
  });
  const auto wells = GaussianWells1D::standard();
  fd_check(wells, "wells", 1e-6, [&] { return BlockedVector(wells.partition(), {rng.uniform(-6, 6)}); });
  const Linear lin(random_blocked_vector(qpart, rng), 0.5);
  fd_check(lin, "linear", 1e-6, [&] { return random_blocked_vector(qpart, rng); });
  const auto task = detail::default_mlp(0, 200);
  fd_check(*task, "mlp", 1e-5, [&] {
    BlockedVector x = task->initial_parameters(rng.next_u64());
    for (double& v : x.values()) v += 0.1 * rng.normal();
    return x;
  });

  // Averaged singleton gradients equal the full-batch gradient.
  {
    const BlockedVector x = task->initial_parameters(9);
    const Evaluation full = task->evaluate(x);
    BlockedVector avg = x.zeros_like();
    for (std::size_t i = 0; i < task->sample_count(); ++i) {
      const std::size_t idx[1] = {i};
      avg = add(avg, task->evaluate_batch(x, idx).grad);
    }
    avg = scale(avg, 1.0 / static_cast<double>(task->sample_count()));
    rec("minibatch_unbiased", max_abs_diff(avg, full.grad), 1e-12, {{"samples", task->sample_count()}});
  }
  {
    std::ostringstream a, b;
    make_blobs(42, 500, 3, 2, 0.3).write_csv(a);
    make_blobs(42, 500, 3, 2, 0.3).write_csv(b);
    rec("blobs_deterministic", a.str() == b.str() ? 0.0 : 1.0, 0.0, {{"seed", 42}});
  }
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemmas", "invariance", "escape", "convergence", "gradients"};
  return names;
}

inline bool is_suite(const std::string& s) {
  if (s == "all") return true;
  for (const auto& n : suite_names())
    if (n == s) return true;
  return false;
}

inline std::vector<CheckRecord> run_suite(const std::string& name, const CheckOptions& opt = {}) {
  if (!is_suite(name)) throw UsageError("unknown suite '" + name + "'");
  std::vector<CheckRecord> out;
  auto want = [&](const char* s) { return name == "all" || name == s; };
  if (want("lemmas")) suite_lemmas(out, opt);
  if (want("invariance")) suite_invariance(out, opt);
  if (want("escape")) suite_escape(out, opt);
  if (want("convergence")) suite_convergence(out, opt);
  if (want("gradients")) suite_gradients(out, opt);
  return out;
}

// Which module invariants each suite exercises.
inline nlohmann::json suite_manifest() {
  return {
      {"lemmas",
       {"blocked_vector: structured norm equals sum of block norms", "blocked_vector: ||v||_2 <= N(v)",
        "blocked_vector: partition round-trip is bit-identical", "standardize: centralize linear, idempotent, self-adjoint",
        "standardize: ||transform(g)||_2 = sqrt(D) at eps = 0", "standardize: <g, transform(g)> = sum_k ||g_k||_phi",
        "standardize: ||x||_phi <= ||x||_2", "theory: phi_pseudo_norm^2 + ||v - phi(v)||^2 = ||v||^2"}},
      {"invariance",
       {"optimizers: loss-scale invariance of iterates (SGD and AdamW hosts)",
        "optimizers: global mean preserved on all-rank-2 models", "optimizers: per-slice update sums vanish",
        "standardize: per-block positive rescaling cancels", "optimizers: reduction identity to the iterate formula",
        "optimizers: determinism", "harness_cli: identical config gives identical traces"}},
      {"escape",
       {"theory: eta_sing = eta_ngd / sqrt(D) <= eta_ngd", "theory: single standardized step escapes narrow wells",
        "theory: GD from the flattest start and near the minimum stays inside", "theory: zero step never escapes"}},
      {"convergence",
       {"theory: time-averaged ||grad F||_2 within bound (quadratic, D in {1,4})",
        "theory: time-averaged ||grad F||_phi within bound (quadratic, D in {1,4})",
        "theory: stochastic MLP audit with B from measured sigma"}},
      {"gradients",
       {"landscapes: analytic gradients match central differences", "landscapes: minibatch gradients unbiased",
        "landscapes: blobs dataset deterministic for a seed"}},
  };
}

}  // namespace sing
