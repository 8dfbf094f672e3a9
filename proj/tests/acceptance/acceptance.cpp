// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <fmt/format.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sing/checks.hpp"
#include "sing/sing.hpp"

using namespace sing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0 = no runtime limit
  std::function<Outcome()> body;
};

std::string fmt_g(double x) { return fmt::format("{:.3g}", x); }

// ---- 1, 2: lemmas and projector properties --------------------------------

Outcome lemmas() {
  Rng rng(1);
  const StandardizeConfig plain{false, true, 0.0}, full{true, true, 0.0};
  double a = 0, b = 0, c = 0, d_phi = 0, d_n = 0, d_ip = 0;
  int ranks[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t D = 1 + static_cast<std::size_t>(trial % 16);
    const auto part = random_partition(rng, D);
    for (const auto& blk : part->blocks()) ++ranks[blk.rank()];
    const BlockedVector g = random_blocked_vector(part, rng);
    const BlockedVector u = sing_transform(g, plain), w = sing_transform(g, full);
    const double N = structured_norm(g), g2 = l2_norm(g), gphi = phi_pseudo_norm(g);
    a = std::max(a, rel_diff(l2_norm(u), std::sqrt(static_cast<double>(D))));
    b = std::max(b, rel_diff(dot(g, u), N));
    c = std::max(c, (g2 - N) / N);
    d_phi = std::max(d_phi, (gphi - g2) / g2);
    d_n = std::max(d_n, (g2 - N) / N);
    d_ip = std::max(d_ip, rel_diff(dot(g, w), structured_phi_norm(g)));
  }
  const bool mixed = ranks[1] > 0 && ranks[2] > 0 && ranks[3] > 0;
  const bool pass = mixed && a <= 1e-10 && b <= 1e-10 && c <= 1e-15 && d_phi <= 1e-15 && d_n <= 1e-15 && d_ip <= 1e-9;
  return {pass, fmt::format("(a) {} (b) {} (c) {} (d) phi-l2 {} l2-N {} ip {}; ranks 1/2/3 = {}/{}/{}", fmt_g(a),
                            fmt_g(b), fmt_g(c), fmt_g(d_phi), fmt_g(d_n), fmt_g(d_ip), ranks[1], ranks[2], ranks[3])};
}

Outcome projector() {
  Rng rng(2);
  double lin = 0, idem = 0, adj = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto part = random_partition(rng, 1 + rng.below(16));
    const BlockedVector x = random_blocked_vector(part, rng), y = random_blocked_vector(part, rng);
    const double s = rng.uniform(-5, 5), t = rng.uniform(-5, 5);
    const BlockedVector lhs = centralize(axpy(scale(x, s), t, y));
    const BlockedVector rhs = axpy(scale(centralize(x), s), t, centralize(y));
    lin = std::max(lin, l2_norm(subtract(lhs, rhs)) / (std::abs(s) * l2_norm(x) + std::abs(t) * l2_norm(y)));
    const BlockedVector cx = centralize(x);
    idem = std::max(idem, l2_norm(subtract(centralize(cx), cx)) / l2_norm(x));
    adj = std::max(adj, std::abs(dot(cx, y) - dot(x, centralize(y))) / (l2_norm(x) * l2_norm(y)));
  }
  return {lin <= 1e-12 && idem <= 1e-12 && adj <= 1e-12,
          fmt::format("linear {} idempotent {} self-adjoint {}", fmt_g(lin), fmt_g(idem), fmt_g(adj))};
}

// ---- 3, 4: invariances of SING runs on the MLP ----------------------------

Outcome scale_invariance() {
  const auto task = std::make_shared<MlpTask>(make_blobs(0, 2000, 3, 2, 0.3), 16);
  const BlockedVector x0 = task->initial_parameters(0);
  const Schedule sched{ScheduleKind::Cosine, 0.05, 25, 500};
  RunOptions ro;
  ro.batch_size = 64;
  ro.seed = 0;
  ro.record_iterates = true;
  double worst = 0.0;
  bool complete = true;
  for (HostKind host : {HostKind::SGD, HostKind::AdamW}) {
    SingPipelineConfig cfg;
    cfg.standardize = {true, true, 0.0};
    cfg.host.kind = host;
    const RunResult ref = run_training(ScaledLandscape(task, 1.0), x0, cfg, sched, ro);
    for (double alpha : {1e-3, 1e3}) {
      const RunResult r = run_training(ScaledLandscape(task, alpha), x0, cfg, sched, ro);
      complete = complete && !r.trace.diverged && r.iterates.size() == 501 && ref.iterates.size() == 501;
      for (std::size_t t = 0; t < std::min(r.iterates.size(), ref.iterates.size()); ++t)
        worst = std::max(worst, relative_error(r.iterates[t], ref.iterates[t]));
    }
  }
  return {complete && worst <= 1e-9, fmt::format("max per-step relative iterate gap {} over 500 steps, hosts sgd/adamw, "
                                                 "alpha in {{1e-3, 1, 1e3}}",
                                                 fmt_g(worst))};
}

Outcome mean_preservation() {
  const MlpTask task(make_blobs(0, 2000, 3, 2, 0.3), 16, false);
  for (const auto& b : task.partition()->blocks())
    if (b.rank() != 2) return {false, "model has a block that is not rank 2"};
  SingPipelineConfig cfg;
  cfg.standardize = {true, true, 0.0};
  const Schedule sched{ScheduleKind::Constant, 0.05, 0, 500};
  RunOptions ro;
  ro.batch_size = 64;
  ro.record_iterates = true;
  const RunResult r = run_training(task, task.initial_parameters(0), cfg, sched, ro);
  if (r.trace.diverged || r.iterates.size() != 501) return {false, "run did not complete"};
  const double m0 = global_mean(r.iterates.front());
  const double drift = std::abs(global_mean(r.iterates.back()) - m0);
  double max_drift = 0.0, slice = 0.0;
  for (std::size_t t = 0; t + 1 < r.iterates.size(); ++t) {
    max_drift = std::max(max_drift, std::abs(global_mean(r.iterates[t + 1]) - m0));
    const BlockedVector du = subtract(r.iterates[t + 1], r.iterates[t]);
    for (std::size_t k = 0; k < du.block_count(); ++k)
      for (double s : slice_sums(du, k)) slice = std::max(slice, std::abs(s));
  }
  return {drift <= 1e-10 && max_drift <= 1e-10 && slice <= 1e-12,
          fmt::format("total mean drift {} (max along run {}), max per-slice update sum {}", fmt_g(drift),
                      fmt_g(max_drift), fmt_g(slice))};
}

// ---- 5, 6: escape -----------------------------------------------------------

Outcome single_step_escape() {
  const auto l = GaussianWells1D::standard();
  const auto wells = analyse_wells(l, 0.5, true);
  if (wells.size() != 2) return {false, fmt::format("expected 2 narrow wells, found {}", wells.size())};
  bool pass = true;
  std::string detail;
  for (const auto& w : wells) {
    const BlockedVector xs(l.partition(), {w.minimizer});
    const double eta = 1.05 * escape_thresholds(w.radius, 1.0, 1).eta_sing;
    const auto sing = single_step_escape_check(l, xs, w.radius, eta, StepMethod::SING);
    const auto gd = single_step_escape_check(l, xs, w.radius, eta, StepMethod::GD);
    // Minimal |F'| over the grid, plus the grid point nearest the minimizer:
    // the flattest start can sit on the hill bounding the ball.
    const EscapeSample *flat = nullptr, *near = nullptr;
    for (const auto& s : gd.samples) {
      if (s.skipped) continue;
      if (!flat || s.grad_norm < flat->grad_norm) flat = &s;
      if (!near || std::abs(s.start[0] - w.minimizer) < std::abs(near->start[0] - w.minimizer)) near = &s;
    }
    const bool ok = sing.all_escaped() && sing.tested + sing.skipped == 1000 && flat && !flat->escaped && near &&
                    !near->escaped;
    pass = pass && ok;
    detail += fmt::format(
        "[x*={:.4f} r={:.4f} eta={:.4f}: sing {}/{} escaped; gd from x={:.5f} ends {:.3g} from x*, from x={:.5f} "
        "ends {:.3g}] ",
        w.minimizer, w.radius, eta, sing.escaped, sing.tested, flat ? flat->start[0] : 0.0,
        flat ? flat->end_distance : 0.0, near ? near->start[0] : 0.0, near ? near->end_distance : 0.0);
  }
  return {pass, detail};
}

Outcome escape_demo() {
  const EscapeDemoResult res = run_escape_demo();
  const auto& l = res.landscape;
  const double xs = res.sing_final_x(), xg = res.sgd_final_x();
  const bool sing_wide = std::abs(xs - res.wide.minimizer) <= 1e-2;
  bool sgd_narrow = false;
  for (const auto& w : res.narrow) sgd_narrow = sgd_narrow || std::abs(xg - w.minimizer) < w.radius;
  const double fs = l.value_at(xs), fg = l.value_at(xg);
  return {sing_wide && sgd_narrow && fs < fg,
          fmt::format("eta0 {:.4f}: sing ends x={:.6f} (wide min {:.6f}, F={:.4g}); best sgd lr {} ends x={:.6f} "
                      "(F={:.4g}, narrow={})",
                      res.sing_base_lr, xs, res.wide.minimizer, fs, res.sgd_best_lr, xg, fg, sgd_narrow)};
}

// ---- 7: convergence audit ---------------------------------------------------

Outcome convergence() {
  bool pass = true;
  std::string detail;
  Rng rng(7);
  for (std::size_t D : {1, 4}) {
    std::vector<BlockSpec> blocks;
    for (std::size_t k = 0; k < D; ++k) blocks.push_back({"w" + std::to_string(k), {2, 3}});
    const auto part = BlockPartition::make(blocks);
    const Quadratic q(part, 2.0);
    BlockedVector x0 = random_blocked_vector(part, rng);
    x0 = scale(x0, 1.0 / l2_norm(x0));
    const ConvergenceRecipe recipe{0.05, 2.0, q.evaluate(x0).value, 0.0, D};
    pass = pass && std::abs(recipe.F0 - 1.0) < 1e-12 && recipe.eta() == 0.05 && recipe.T() == 400;
    for (NormMode mode : {NormMode::L2, NormMode::Phi}) {
      const auto tr = run_for_audit(q, x0, recipe.eta(), recipe.T(), mode == NormMode::Phi);
      const auto a = convergence_audit(tr, recipe, mode);
      pass = pass && a.pass && a.simplified_pass;
      detail += fmt::format("[D={} {}: {:.4g} <= {:.4g}, {:.4g}] ", D, mode == NormMode::L2 ? "l2" : "phi", a.lhs,
                            a.rhs, a.simplified_rhs);
    }
  }
  const MlpTask task(make_blobs(0, 2000, 3, 2, 0.3), 16);
  const BlockedVector x0 = task.initial_parameters(0);
  const double F0 = task.evaluate(x0).value;
  const double sigma2 = estimate_gradient_variance(task, x0);
  const double L = estimate_lipschitz(task, x0, 1.0, 200, 11);
  const ConvergenceRecipe recipe{0.05, L, F0, std::sqrt(sigma2), task.partition()->block_count()};
  const std::size_t B = std::min<std::size_t>(recipe.B(), task.sample_count());
  const auto tr = run_for_audit(task, x0, recipe.eta(), recipe.T(), true, B, 5);
  const auto a = convergence_audit(tr, recipe, NormMode::L2);
  pass = pass && a.pass;
  detail += fmt::format("[mlp sigma2={:.4g} L={:.4g} B={} T={}: {:.4g} <= {:.4g}]", sigma2, L, B, recipe.T(), a.lhs,
                        a.rhs);
  return {pass, detail};
}

// ---- 8, 9: gradient oracle, clipping invariance ---------------------------

Outcome gradient_oracle() {
  const auto records = run_suite("gradients");
  bool pass = true;
  int fd = 0;
  std::string detail;
  for (const auto& r : records) {
    if (r.check.rfind("fd_match_", 0) != 0) continue;
    ++fd;
    pass = pass && r.pass && r.params.at("points") == 100 && r.params.at("h") == 1e-5;
    detail += fmt::format("{} {} (<{}) ", r.check.substr(9), fmt_g(r.lhs), fmt_g(r.rhs));
  }
  return {pass && fd == 5, detail};
}

Outcome clipping_invariance() {
  Rng rng(9);
  std::size_t bit_mismatch = 0;
  double exact = 0.0, approx = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto part = random_partition(rng, 1 + rng.below(12));
    const BlockedVector g = random_blocked_vector(part, rng);
    BlockedVector pow2 = g, any = g;
    for (std::size_t k = 0; k < g.block_count(); ++k) {
      const double c2 = std::ldexp(1.0, static_cast<int>(rng.below(41)) - 20);
      const double c = std::pow(10.0, rng.uniform(-4, 4));
      for (double& x : pow2.block(k)) x *= c2;
      for (double& x : any.block(k)) x *= c;
    }
    const BlockedVector u = sing_transform(g, {true, true, 0.0});
    const BlockedVector u2 = sing_transform(pow2, {true, true, 0.0});
    bit_mismatch += std::memcmp(u.values().data(), u2.values().data(), u.size() * sizeof(double)) != 0;
    exact = std::max(exact, max_abs_diff(u, sing_transform(any, {true, true, 0.0})));
    // With eps > 0 the gap is about eps / ||g_k||, so block norms are kept in
    // [1e-2, 1e3] on both sides of the rescaling.
    const BlockedVector cg = centralize(g);
    BlockedVector before = cg, after = cg;
    for (std::size_t k = 0; k < g.block_count(); ++k) {
      const double n = block_l2_norm(cg, k);
      const double s1 = std::pow(10.0, rng.uniform(-2, 3)) / n, s2 = std::pow(10.0, rng.uniform(-2, 3)) / n;
      for (double& x : before.block(k)) x *= s1;
      for (double& x : after.block(k)) x *= s2;
    }
    approx = std::max(approx, max_abs_diff(sing_transform(before, {true, true, 1e-8}),
                                           sing_transform(after, {true, true, 1e-8})));
  }
  return {bit_mismatch == 0 && exact <= 1e-14 && approx <= 1e-6,
          fmt::format("eps=0: power-of-two scales bitwise mismatches {}, arbitrary scales max |diff| {}; eps=1e-8 (block norms >= 1e-2): {}",
                      bit_mismatch, fmt_g(exact), fmt_g(approx))};
}

// ---- 10: training smoke -----------------------------------------------------

Outcome training_smoke(std::uint64_t seed) {
  const MlpTask task(make_blobs(seed, 2000, 3, 2, 0.3), 16);
  SingPipelineConfig cfg;
  cfg.standardize = {true, true, 1e-8};
  cfg.host.kind = HostKind::AdamW;
  const std::size_t batch = 64, per_epoch = 2000 / batch, epochs = 200;
  const std::uint64_t warmup = 5 * per_epoch;
  const Schedule sched{ScheduleKind::Cosine, 1e-2, warmup, epochs * per_epoch};
  RunOptions ro;
  ro.batch_size = batch;
  ro.seed = seed;
  ro.record_full_loss = true;
  ro.record_iterates = true;
  const RunResult r = run_training(task, task.initial_parameters(seed), cfg, sched, ro);
  if (r.trace.diverged) return {false, "diverged: " + r.trace.diverged_reason};
  std::size_t reached = 0;
  double best_acc = 0.0;
  for (std::size_t e = 1; e <= epochs; ++e) {
    const double acc = task.accuracy(r.iterates[e * per_epoch]);
    best_acc = std::max(best_acc, acc);
    if (!reached && acc >= 0.95) reached = e;
  }
  const double final_acc = task.accuracy(r.final_params);
  std::size_t spikes = 0;
  double worst_ratio = 0.0;
  const auto& loss = r.full_loss;
  for (std::size_t t = std::max<std::size_t>(warmup, 50); t < loss.size(); ++t) {
    std::vector<double> window(loss.begin() + static_cast<std::ptrdiff_t>(t - 50),
                               loss.begin() + static_cast<std::ptrdiff_t>(t));
    std::nth_element(window.begin(), window.begin() + 25, window.end());
    const double hi = window[25];
    std::nth_element(window.begin(), window.begin() + 24, window.begin() + 25);
    const double median = 0.5 * (hi + window[24]);
    worst_ratio = std::max(worst_ratio, loss[t] / median);
    spikes += loss[t] > 10.0 * median;
  }
  return {reached > 0 && spikes == 0,
          fmt::format("seed {}: 95% reached at epoch {}, final accuracy {:.4f}, worst loss/median {:.3f}, spikes {}", seed,
                      reached, final_acc, worst_ratio, spikes)};
}

// ---- 11: determinism of the CLI -------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("sing_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"mlp", "landscape.kind = mlp\noptimizer.kind = adamw\nlookahead.enabled = true\nweight_decay = 0.01\n"
              "schedule.warmup_steps = 20\nschedule.total_steps = 300\nseed = 5\n"},
      {"adabelief", "landscape.kind = mlp\noptimizer.kind = adabelief\noptimizer.softplus = true\n"
                    "schedule.total_steps = 200\nseed = 9\n"},
      {"quadratic", "landscape.kind = quadratic\nlandscape.blocks = W:4x3,b:4\nlandscape.x0 = 0.7\n"
                    "optimizer.kind = sgd\noptimizer.momentum = 0.9\nschedule.total_steps = 200\n"},
      {"wells", "landscape.kind = wells\nsing.centralize = false\nsing.epsilon = 0\nschedule.base_lr = 0.84\n"
                "schedule.total_steps = 1000\n"},
  };
  std::size_t identical = 0;
  std::string detail;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = dir / (name + ".cfg");
    std::ofstream(cfg, std::ios::binary) << text;
    std::string outs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / fmt::format("{}_{}.csv", name, rep);
      const std::string cmd =
          fmt::format("{} run --config {} --out {} > /dev/null 2>&1", SING_CLI_PATH, cfg.string(), out.string());
      const int status = std::system(cmd.c_str());
      codes[rep] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      outs[rep] = slurp(out);
    }
    const bool same = codes[0] == 0 && codes[1] == 0 && !outs[0].empty() && outs[0] == outs[1];
    identical += same;
    detail += fmt::format("{} {} ({} bytes) ", name, same ? "identical" : "DIFFERENT", outs[0].size());
  }
  fs::remove_all(dir);
  return {identical == configs.size(), detail};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "lemma identities on 1000 random blocked vectors", 5, lemmas},
      {2, "centralization is a linear idempotent self-adjoint projector", 1, projector},
      {3, "iterates invariant to loss scaling", 30, scale_invariance},
      {4, "global mean preserved on an all-rank-2 model", 0, mean_preservation},
      {5, "single standardized step escapes narrow wells, GD does not", 5, single_step_escape},
      {6, "three-minima escape experiment", 10, escape_demo},
      {7, "convergence bounds (quadratic and stochastic MLP)", 60, convergence},
      {8, "analytic gradients match central differences", 10, gradient_oracle},
      {9, "per-block rescaling invariance", 0, clipping_invariance},
      {10, "AdamW + standardization training smoke, seed 0", 120, [] { return training_smoke(0); }},
      {10, "AdamW + standardization training smoke, seed 1", 120, [] { return training_smoke(1); }},
      {10, "AdamW + standardization training smoke, seed 2", 120, [] { return training_smoke(2); }},
      {11, "CLI runs produce byte-identical traces", 0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    if (!in_time) o.detail += fmt::format(" runtime over budget of {} s", c.budget_s);
    const bool pass = o.pass && in_time;
    failed += !pass;
    fmt::print("{} AC{:<2} {} [{:.2f} s] {}\n", pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} acceptance checks passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
