#pragma once

// Minimal deterministic SVG line/marker plots.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sing/errors.hpp"

namespace sing {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool markers = false;  // circles instead of a polyline
};

struct PlotOptions {
  std::string title;
  std::string xlabel = "step";
  std::string ylabel;
  int width = 800;
  int height = 480;
  bool log_y = false;
};

namespace detail {
inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return colors[i % (sizeof colors / sizeof *colors)];
}
}  // namespace detail

inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt = {}) {
  if (series.empty()) throw UsageError("render_svg: nothing to plot");
  auto ty = [&](double y) { return opt.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  std::size_t points = 0;
  for (const auto& s : series) {
    if (s.xs.size() != s.ys.size()) throw UsageError("render_svg: series '" + s.label + "' has mismatched x/y");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, ty(s.ys[i]));
      ymax = std::max(ymax, ty(s.ys[i]));
      ++points;
    }
  }
  if (points == 0) throw UsageError("render_svg: no finite points");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", opt.width,
      opt.height, opt.width, opt.height);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n", opt.width / 2,
                       detail::xml_escape(opt.title));
  out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     left, top, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"11\">{:.4g}</text>\n",
                       px(fx), top + ph + 16, fx);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n", left - 6,
                       top + (1.0 - i / 4.0) * ph + 4,
                       opt.log_y ? fmt::format("1e{:.2g}", fy) : fmt::format("{:.4g}", fy));
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
                     left + pw / 2, opt.height - 10, detail::xml_escape(opt.xlabel));
  if (!opt.ylabel.empty())
    out += fmt::format(
        "<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
        top + ph / 2, top + ph / 2, detail::xml_escape(opt.ylabel));

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = detail::palette(si);
    if (s.markers) {
      out += fmt::format("<g class=\"markers\" fill=\"{}\" fill-opacity=\"0.6\">\n", color);
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"/>\n", px(s.xs[i]), py(s.ys[i]));
      }
      out += "</g>\n";
    } else {
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
      bool first = true;
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
        out += fmt::format("{}{:.2f},{:.2f}", first ? "" : " ", px(s.xs[i]), py(s.ys[i]));
        first = false;
      }
      out += "\"/>\n";
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">{}</text>\n", left + 10,
                       top + 16 + 16.0 * static_cast<double>(si), color, detail::xml_escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace sing
