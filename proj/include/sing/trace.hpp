#pragma once

// Run traces: one record per optimizer step, written as CSV preceded by a
// '#'-prefixed header (format tag, seed, config snapshot, block manifest) and
// optionally followed by a '# diverged:' footer.
//
//   # sing-trace v1
//   # seed = 0
//   # config optimizer.kind = sgd
//   # block W1 16x2
//   step,lr,loss,grad_l2,grad_phi,update_l2,param_mean,gnorm_W1,...
//   0,0.01,1.0986,...

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sing/blocked_vector.hpp"
#include "sing/errors.hpp"

namespace sing {

struct StepRecord {
  std::uint64_t step = 0;
  double lr = 0.0;
  double loss = 0.0;
  double grad_l2 = 0.0;
  double grad_phi = 0.0;
  double update_l2 = 0.0;
  double param_mean = 0.0;
  std::vector<double> block_norms;  // per-block L2 norms of the raw gradient
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::vector<std::string> config_snapshot;  // "key = value" lines
  PartitionPtr partition;
  std::vector<StepRecord> records;
  bool diverged = false;
  std::string diverged_reason;
};

inline constexpr const char* kTraceFormatTag = "sing-trace v1";

inline std::vector<std::string> trace_columns(const BlockPartition& part) {
  std::vector<std::string> cols{"step", "lr", "loss", "grad_l2", "grad_phi", "update_l2", "param_mean"};
  for (const auto& b : part.blocks()) cols.push_back("gnorm_" + b.name);
  return cols;
}

inline void write_trace(std::ostream& out, const RunTrace& tr) {
  if (!tr.partition) throw UsageError("write_trace: trace has no partition");
  out << "# " << kTraceFormatTag << '\n';
  out << "# seed = " << tr.seed << '\n';
  for (const auto& line : tr.config_snapshot) out << "# config " << line << '\n';
  std::istringstream manifest(tr.partition->manifest());
  for (std::string line; std::getline(manifest, line);) out << "# block " << line << '\n';
  const auto cols = trace_columns(*tr.partition);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : tr.records) {
    out << fmt::format("{},{},{},{},{},{},{}", r.step, r.lr, r.loss, r.grad_l2, r.grad_phi, r.update_l2,
                       r.param_mean);
    for (double b : r.block_norms) out << fmt::format(",{}", b);
    out << '\n';
  }
  if (tr.diverged) out << "# diverged: " << tr.diverged_reason << '\n';
  out.flush();
}

inline void write_trace_file(const std::string& path, const RunTrace& tr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  write_trace(out, tr);
}

// A parsed trace file: header metadata plus a numeric table.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> config_snapshot;
  std::string manifest;
  bool diverged = false;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw UsageError("unknown column '" + name + "'");
  }

  std::vector<double> column(const std::string& name) const {
    const auto c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
};

inline TraceTable read_trace(std::istream& in) {
  TraceTable t;
  std::string line;
  int lineno = 0;
  bool tagged = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.size() > 2 ? line.substr(2) : "";
      if (body == kTraceFormatTag) tagged = true;
      else if (body.rfind("config ", 0) == 0) t.config_snapshot.push_back(body.substr(7));
      else if (body.rfind("block ", 0) == 0) t.manifest += body.substr(6) + '\n';
      else if (body.rfind("diverged", 0) == 0) t.diverged = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size())
      throw UsageError("trace line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                       " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw UsageError("trace line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!tagged) throw UsageError("not a trace file (missing '# " + std::string(kTraceFormatTag) + "' header)");
  if (t.columns.empty()) throw UsageError("trace has no column header");
  return t;
}

inline TraceTable read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open trace '" + path + "'");
  return read_trace(in);
}

}  // namespace sing
