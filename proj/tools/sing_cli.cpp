// sing: run standardized-gradient experiments, verify the property suites,
// reproduce the three-minima escape experiment and plot traces.
//
// Exit codes: 0 ok, 1 check failure, 2 usage/config error, 3 numeric divergence.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sing/checks.hpp"
#include "sing/sing.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kDiverged = 3 };

int cmd_run(const std::string& config_path, const std::string& out_path, const std::optional<std::uint64_t>& seed) {
  sing::ExperimentConfig cfg = sing::parse_config_file(config_path);
  if (seed) cfg.seed = *seed;
  const sing::RunResult res = sing::run_experiment(cfg);
  sing::write_trace_file(out_path, res.trace);
  if (res.trace.diverged) {
    std::cerr << "diverged: " << res.trace.diverged_reason << " (partial trace in " << out_path << ")\n";
    return kDiverged;
  }
  const auto& last = res.trace.records.back();
  std::cout << fmt::format("{} steps, final loss {}, trace {}\n", res.trace.records.size(), last.loss, out_path);
  return kOk;
}

int cmd_check(const std::string& suite, const std::string& report, const std::string& manifest, bool json_stdout,
              const std::string& fault) {
  if (!sing::is_suite(suite)) {
    std::cerr << "unknown suite '" << suite << "' (expected lemmas, invariance, escape, convergence, gradients, all)\n";
    return kUsage;
  }
  sing::CheckOptions opt;
  if (fault == "gamma") opt.transform = sing::broken_gamma_transform;
  else if (!fault.empty()) {
    std::cerr << "unknown fault '" << fault << "' (expected gamma)\n";
    return kUsage;
  }
  if (!manifest.empty()) {
    std::ofstream m(manifest);
    m << sing::suite_manifest().dump(2) << '\n';
  }
  std::vector<sing::CheckRecord> records;
  try {
    records = sing::run_suite(suite, opt);
  } catch (const sing::NumericError& e) {
    // A fault that produces a division by zero is still a failed check.
    records.push_back({suite, "numeric_error", 1.0, 0.0, false, {{"what", e.what()}}});
  }
  std::ofstream rep;
  if (!report.empty()) rep.open(report);
  bool all = true;
  for (const auto& r : records) {
    all = all && r.pass;
    const std::string line = r.to_json().dump();
    if (rep.is_open()) rep << line << '\n';
    if (json_stdout) std::cout << line << '\n';
    else std::cout << fmt::format("{} {}/{} lhs={:.6g} rhs={:.6g}\n", r.pass ? "PASS" : "FAIL", r.suite, r.check, r.lhs, r.rhs);
  }
  if (!json_stdout) std::cout << fmt::format("{} checks, {}\n", records.size(), all ? "all passed" : "FAILURES");
  return all ? kOk : kCheckFailed;
}

std::vector<std::string> demo_snapshot(const std::string& method, double lr, std::uint64_t steps, double x0) {
  return {"landscape.kind = wells", "landscape.x0 = " + fmt::format("{}", x0), "schedule.kind = cosine",
          "schedule.base_lr = " + fmt::format("{}", lr), "schedule.total_steps = " + std::to_string(steps),
          "optimizer.kind = sgd", std::string("sing.enabled = ") + (method == "sing" ? "true" : "false"),
          "sing.centralize = false", "sing.epsilon = 0"};
}

int cmd_escape_demo(const std::string& out_dir, double sing_lr) {
  std::filesystem::create_directories(out_dir);
  sing::EscapeDemoOptions opt;
  opt.sing_base_lr = sing_lr;
  sing::EscapeDemoResult res = sing::run_escape_demo(opt);
  res.sing.trace.config_snapshot = demo_snapshot("sing", res.sing_base_lr, opt.total_steps, opt.x0);
  res.sgd.trace.config_snapshot = demo_snapshot("sgd", res.sgd_best_lr, opt.total_steps, opt.x0);
  const auto dir = std::filesystem::path(out_dir);
  sing::write_trace_file((dir / "sing_trace.csv").string(), res.sing.trace);
  sing::write_trace_file((dir / "sgd_trace.csv").string(), res.sgd.trace);

  const auto& l = res.landscape;
  sing::PlotSeries curve{"F(x)", {}, {}, false};
  for (int i = 0; i <= 1200; ++i) {
    const double x = -6.0 + 12.0 * i / 1200.0;
    curve.xs.push_back(x);
    curve.ys.push_back(l.value_at(x));
  }
  auto markers = [&](const std::string& label, const sing::RunResult& r) {
    sing::PlotSeries s{label, {}, {}, true};
    for (const auto& x : r.iterates) {
      s.xs.push_back(x[0]);
      s.ys.push_back(l.value_at(x[0]));
    }
    return s;
  };
  sing::PlotOptions po;
  po.title = "three-minima landscape: SGD vs SGD + standardization";
  po.xlabel = "x";
  po.ylabel = "F(x)";
  const std::string svg = sing::render_svg(
      {curve, markers(fmt::format("SGD lr={}", res.sgd_best_lr), res.sgd),
       markers(fmt::format("SGD+SING lr={:.4g}", res.sing_base_lr), res.sing)},
      po);
  std::ofstream(dir / "escape.svg") << svg;

  nlohmann::json summary = {{"sing_base_lr", res.sing_base_lr},
                            {"sing_final_x", res.sing_final_x()},
                            {"sing_final_loss", l.value_at(res.sing_final_x())},
                            {"sgd_best_lr", res.sgd_best_lr},
                            {"sgd_final_x", res.sgd_final_x()},
                            {"sgd_final_loss", l.value_at(res.sgd_final_x())},
                            {"wide_minimizer", res.wide.minimizer}};
  for (const auto& w : res.narrow)
    summary["narrow_wells"].push_back({{"minimizer", w.minimizer}, {"radius", w.radius}, {"value", w.value}});
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int cmd_plot(const std::vector<std::string>& traces, const std::string& out, const std::string& cols, bool log_y) {
  const auto names = sing::detail::split(cols, ',');
  if (names.empty()) {
    std::cerr << "--cols must name at least one column\n";
    return kUsage;
  }
  std::vector<sing::PlotSeries> series;
  for (const auto& path : traces) {
    const sing::TraceTable t = sing::read_trace_file(path);
    if (t.rows.empty()) {
      std::cerr << "trace '" << path << "' has no records\n";
      return kUsage;
    }
    const auto steps = t.column("step");
    for (const auto& c : names) {
      const std::string label = traces.size() > 1 ? std::filesystem::path(path).stem().string() + ":" + c : c;
      series.push_back({label, steps, t.column(c), false});
    }
  }
  sing::PlotOptions po;
  po.title = cols;
  po.log_y = log_y;
  std::ofstream of(out, std::ios::binary);
  if (!of) {
    std::cerr << "cannot write '" << out << "'\n";
    return kUsage;
  }
  of << sing::render_svg(series, po);
  return kOk;
}

int cmd_export_data(std::uint64_t seed, std::size_t n, std::size_t classes, std::size_t dim, double spread,
                    const std::string& out) {
  std::ofstream of(out, std::ios::binary);
  if (!of) {
    std::cerr << "cannot write '" << out << "'\n";
    return kUsage;
  }
  sing::make_blobs(seed, n, classes, dim, spread).write_csv(of);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standardized-gradient optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file and write its trace");
  run->add_option("--config", config_path, "Key-value config file")->required();
  run->add_option("--out", out_path, "Trace CSV to write")->required();
  run->add_option("--seed", seed, "Override the config seed");

  std::string suite, report, manifest, fault;
  bool json_stdout = false;
  auto* check = app.add_subcommand("check", "Run a verification suite");
  check->add_option("suite", suite, "lemmas | invariance | escape | convergence | gradients | all")->required();
  check->add_option("--report", report, "Write JSON-lines records to this file");
  check->add_option("--manifest", manifest, "Write the suite-to-invariant manifest (JSON) to this file");
  check->add_flag("--json", json_stdout, "Print JSON-lines instead of text");
  check->add_option("--inject-fault", fault, "Run against a deliberately broken operator (gamma)");

  std::string demo_dir;
  double sing_lr = 0.0;
  auto* demo = app.add_subcommand("escape-demo", "Three-minima experiment: SGD vs SGD with standardization");
  demo->add_option("--out", demo_dir, "Output directory")->required();
  demo->add_option("--sing-lr", sing_lr, "Base step size of the standardized run (default 2 * max narrow radius)");

  std::vector<std::string> traces;
  std::string plot_out, cols = "loss";
  bool log_y = false;
  auto* plot = app.add_subcommand("plot", "Render trace columns as SVG");
  plot->add_option("--trace", traces, "Trace file (repeat to overlay)")->required();
  plot->add_option("--out", plot_out, "SVG file to write")->required();
  plot->add_option("--cols", cols, "Comma-separated columns");
  plot->add_flag("--logy", log_y, "Logarithmic y axis");

  std::uint64_t data_seed = 0;
  std::size_t data_n = 2000, data_k = 3, data_dim = 2;
  double data_spread = 0.3;
  std::string data_out;
  auto* data = app.add_subcommand("export-data", "Write a blobs dataset as CSV");
  data->add_option("--seed", data_seed);
  data->add_option("--n", data_n);
  data->add_option("--classes", data_k);
  data->add_option("--dim", data_dim);
  data->add_option("--spread", data_spread);
  data->add_option("--out", data_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_path, seed);
    if (*check) return cmd_check(suite, report, manifest, json_stdout, fault);
    if (*demo) return cmd_escape_demo(demo_dir, sing_lr);
    if (*plot) return cmd_plot(traces, plot_out, cols, log_y);
    if (*data) return cmd_export_data(data_seed, data_n, data_k, data_dim, data_spread, data_out);
  } catch (const sing::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const sing::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const sing::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kDiverged;
  }
  return kUsage;
}
