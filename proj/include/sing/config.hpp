#pragma once

// Plain key-value experiment configuration.
//
//   # comment
//   optimizer.kind = adamw
//   schedule.base_lr = 0.01
//
// Every key must be known; errors carry the offending line number. The
// snapshot() of a parsed config parses back to an identical config.

#include <fmt/format.h>

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sing/errors.hpp"
#include "sing/optimizers.hpp"

namespace sing {

enum class LandscapeKind { Quadratic, Rosenbrock, Wells, Mlp };

inline const char* to_string(LandscapeKind k) {
  switch (k) {
    case LandscapeKind::Quadratic: return "quadratic";
    case LandscapeKind::Rosenbrock: return "rosenbrock";
    case LandscapeKind::Wells: return "wells";
    case LandscapeKind::Mlp: return "mlp";
  }
  return "?";
}

struct LandscapeConfig {
  LandscapeKind kind = LandscapeKind::Wells;
  std::string blocks = "x:1";       // quadratic only: "name:2x3,name2:4"
  double L = 1.0;                   // quadratic only
  std::vector<double> x0 = {-4.2};  // one value broadcasts; empty = landscape default
  double loss_scale = 1.0;
  // mlp only
  std::size_t data_n = 2000;
  std::size_t data_classes = 3;
  std::size_t data_dim = 2;
  double data_spread = 0.3;
  std::size_t hidden = 16;
  bool bias = true;
  std::size_t batch_size = 64;  // 0 = full batch
};

struct ExperimentConfig {
  SingPipelineConfig pipeline;
  Schedule schedule;
  LandscapeConfig landscape;
  std::uint64_t seed = 0;

  void validate() const {
    pipeline.validate();
    schedule.validate();
    if (!(landscape.loss_scale > 0.0)) throw ConfigError("loss_scale must be > 0");
    if (landscape.kind == LandscapeKind::Quadratic && !(landscape.L > 0.0)) throw ConfigError("landscape.L must be > 0");
  }

  std::vector<std::string> snapshot() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  }
}

inline std::uint64_t parse_uint(const std::string& v, const std::string& key, int line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'", line);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": integer out of range", line);
  }
}

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'", line);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, sep);) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

inline std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt::format("{}", xs[i]);
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  auto& P = cfg.pipeline;
  auto& S = cfg.schedule;
  auto& Lc = cfg.landscape;
  bool sing_enabled = true;
  bool sing_normalize = true;
  std::set<std::string> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", lineno);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", lineno);
    const int ln = lineno;
    auto num = [&] { return detail::parse_double(val, key, ln); };
    auto uint = [&] { return detail::parse_uint(val, key, ln); };
    auto flag = [&] { return detail::parse_bool(val, key, ln); };
    try {
      if (key == "optimizer.kind") P.host.kind = parse_host_kind(val);
      else if (key == "optimizer.momentum") P.host.momentum = num();
      else if (key == "optimizer.beta1") P.host.beta1 = num();
      else if (key == "optimizer.beta2") P.host.beta2 = num();
      else if (key == "optimizer.eps") P.host.eps_opt = num();
      else if (key == "optimizer.softplus") P.host.softplus_enabled = flag();
      else if (key == "optimizer.softplus_beta") P.host.softplus_beta = num();
      else if (key == "sing.enabled") sing_enabled = flag();
      else if (key == "sing.centralize") P.standardize.centralize_enabled = flag();
      else if (key == "sing.normalize") sing_normalize = flag();
      else if (key == "sing.epsilon") P.standardize.epsilon = num();
      else if (key == "lookahead.enabled") P.lookahead.enabled = flag();
      else if (key == "lookahead.k") P.lookahead.k = uint();
      else if (key == "lookahead.alpha") P.lookahead.alpha = num();
      else if (key == "schedule.kind") {
        if (val == "constant") S.kind = ScheduleKind::Constant;
        else if (val == "cosine") S.kind = ScheduleKind::Cosine;
        else throw ConfigError("schedule.kind: expected constant or cosine, got '" + val + "'", ln);
      } else if (key == "schedule.base_lr") S.base_lr = num();
      else if (key == "schedule.warmup_steps") S.warmup_steps = uint();
      else if (key == "schedule.total_steps") S.total_steps = uint();
      else if (key == "weight_decay") P.weight_decay = num();
      else if (key == "weight_decay_skip") {
        P.weight_decay_skip.clear();
        for (auto& n : detail::split(val, ',')) P.weight_decay_skip.insert(n);
      } else if (key == "seed") cfg.seed = uint();
      else if (key == "loss_scale") Lc.loss_scale = num();
      else if (key == "landscape.kind") {
        if (val == "quadratic") Lc.kind = LandscapeKind::Quadratic;
        else if (val == "rosenbrock") Lc.kind = LandscapeKind::Rosenbrock;
        else if (val == "wells") Lc.kind = LandscapeKind::Wells;
        else if (val == "mlp") Lc.kind = LandscapeKind::Mlp;
        else throw ConfigError("landscape.kind: expected quadratic, rosenbrock, wells or mlp, got '" + val + "'", ln);
      } else if (key == "landscape.blocks") Lc.blocks = val;
      else if (key == "landscape.L") Lc.L = num();
      else if (key == "landscape.x0") {
        Lc.x0.clear();
        for (auto& tok : detail::split(val, ',')) Lc.x0.push_back(detail::parse_double(tok, key, ln));
      } else if (key == "data.n") Lc.data_n = uint();
      else if (key == "data.classes") Lc.data_classes = uint();
      else if (key == "data.dim") Lc.data_dim = uint();
      else if (key == "data.spread") Lc.data_spread = num();
      else if (key == "mlp.hidden") Lc.hidden = uint();
      else if (key == "mlp.bias") Lc.bias = flag();
      else if (key == "mlp.batch_size") Lc.batch_size = uint();
      else throw ConfigError("unknown key '" + key + "'", ln);
    } catch (const ConfigError& e) {
      if (e.line() > 0) throw;
      throw ConfigError(e.what(), ln);
    }
  }
  if (!sing_enabled) {
    P.standardize.centralize_enabled = false;
    P.standardize.normalize_enabled = false;
  } else {
    P.standardize.normalize_enabled = sing_normalize;
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

inline std::vector<std::string> ExperimentConfig::snapshot() const {
  const auto& P = pipeline;
  const auto& Lc = landscape;
  std::vector<std::string> out;
  auto kv = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  auto d = [](double x) { return fmt::format("{}", x); };
  kv("seed", std::to_string(seed));
  kv("optimizer.kind", to_string(P.host.kind));
  kv("optimizer.momentum", d(P.host.momentum));
  kv("optimizer.beta1", d(P.host.beta1));
  kv("optimizer.beta2", d(P.host.beta2));
  kv("optimizer.eps", d(P.host.eps_opt));
  kv("optimizer.softplus", b(P.host.softplus_enabled));
  kv("optimizer.softplus_beta", d(P.host.softplus_beta));
  const bool any = P.standardize.centralize_enabled || P.standardize.normalize_enabled;
  kv("sing.enabled", b(any));
  kv("sing.centralize", b(P.standardize.centralize_enabled));
  kv("sing.normalize", b(P.standardize.normalize_enabled || !any));
  kv("sing.epsilon", d(P.standardize.epsilon));
  kv("lookahead.enabled", b(P.lookahead.enabled));
  kv("lookahead.k", std::to_string(P.lookahead.k));
  kv("lookahead.alpha", d(P.lookahead.alpha));
  kv("schedule.kind", schedule.kind == ScheduleKind::Cosine ? "cosine" : "constant");
  kv("schedule.base_lr", d(schedule.base_lr));
  kv("schedule.warmup_steps", std::to_string(schedule.warmup_steps));
  kv("schedule.total_steps", std::to_string(schedule.total_steps));
  kv("weight_decay", d(P.weight_decay));
  std::string skip;
  for (const auto& n : P.weight_decay_skip) skip += (skip.empty() ? "" : ",") + n;
  kv("weight_decay_skip", skip);
  kv("loss_scale", d(Lc.loss_scale));
  kv("landscape.kind", to_string(Lc.kind));
  kv("landscape.blocks", Lc.blocks);
  kv("landscape.L", d(Lc.L));
  kv("landscape.x0", detail::join_doubles(Lc.x0));
  kv("data.n", std::to_string(Lc.data_n));
  kv("data.classes", std::to_string(Lc.data_classes));
  kv("data.dim", std::to_string(Lc.data_dim));
  kv("data.spread", d(Lc.data_spread));
  kv("mlp.hidden", std::to_string(Lc.hidden));
  kv("mlp.bias", b(Lc.bias));
  kv("mlp.batch_size", std::to_string(Lc.batch_size));
  return out;
}

}  // namespace sing
