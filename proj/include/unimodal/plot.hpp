#pragma once

// Deterministic SVG rendering of observed data with fitted curves.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "unimodal/dataio.hpp"
#include "unimodal/error.hpp"
#include "unimodal/model_zoo.hpp"

namespace unimodal {

/// A fitted curve in original units.
struct PlotCurve {
  ModelKind kind;
  RawSeries curve;
};

constexpr std::string_view kind_color(ModelKind kind) noexcept {
  switch (kind) {
  case ModelKind::Richards:
    return "#1f77b4";
  case ModelKind::Skewnormal:
    return "#9467bd";
  case ModelKind::GenGamma:
    return "#2ca02c";
  case ModelKind::MaxEnt:
    return "#d62728";
  case ModelKind::Beta:
    return "#ff7f0e";
  }
  return "#000000";
}

namespace detail {

/// Tick positions at 1, 2 or 5 times a power of ten covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  const double raw = span / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * magnitude;
    if (span / step <= target) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

} // namespace detail

/// SVG text: data as circles, one polyline per fit, legend, linear axes.
inline std::string plot_svg(const RawSeries& raw, const std::vector<PlotCurve>& fits, std::string_view title = {}) {
  if (raw.size() == 0 && fits.empty()) {
    throw ArgumentError("nothing to plot");
  }
  constexpr double width = 800.0;
  constexpr double height = 500.0;
  constexpr double left = 80.0;
  constexpr double right = 170.0;
  constexpr double top = 40.0;
  constexpr double bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double t_lo = std::numeric_limits<double>::infinity();
  double t_hi = -t_lo;
  double y_hi = 0.0;
  auto extend = [&](const RawSeries& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      t_lo = std::min(t_lo, s.times[i]);
      t_hi = std::max(t_hi, s.times[i]);
      y_hi = std::max(y_hi, s.values[i]);
    }
  };
  extend(raw);
  for (const auto& f : fits) extend(f.curve);
  if (!(t_hi > t_lo)) {
    t_lo -= 0.5;
    t_hi += 0.5;
  }
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.05;

  auto px = [&](double t) { return left + (t - t_lo) / (t_hi - t_lo) * plot_w; };
  auto py = [&](double y) { return top + plot_h - y / y_hi * plot_h; };

  std::string svg;
  svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
                     "font-family=\"sans-serif\" font-size=\"12\">\n",
                     width, height, width, height);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", width, height);
  if (!title.empty()) {
    svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", left + plot_w / 2.0,
                       detail::xml_escape(title));
  }

  // Axes and ticks.
  svg += "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
  svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left, top + plot_h, left + plot_w, top + plot_h);
  svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left, top, left, top + plot_h);
  svg += "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
  for (double t : detail::nice_ticks(t_lo, t_hi)) {
    const double x = px(t);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#000000\"/>\n", x, top + plot_h, x,
                       top + plot_h + 5.0);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", x, top + plot_h + 18.0, t);
  }
  for (double y : detail::nice_ticks(0.0, y_hi)) {
    const double yy = py(y);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#000000\"/>\n", left - 5.0, yy, left, yy);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 8.0, yy + 4.0, y);
  }
  svg += "</g>\n";

  for (const auto& f : fits) {
    svg += fmt::format("<polyline class=\"fit\" data-model=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"",
                       kind_slug(f.kind), kind_color(f.kind));
    for (std::size_t i = 0; i < f.curve.size(); ++i) {
      if (i > 0) svg += ' ';
      svg += fmt::format("{:.2f},{:.2f}", px(f.curve.times[i]), py(f.curve.values[i]));
    }
    svg += "\"/>\n";
  }

  if (raw.size() > 0) {
    svg += "<g class=\"data\" fill=\"#000000\">\n";
    for (std::size_t i = 0; i < raw.size(); ++i) {
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"/>\n", px(raw.times[i]), py(raw.values[i]));
    }
    svg += "</g>\n";
  }

  // Legend.
  svg += "<g class=\"legend\">\n";
  double ly = top + 10.0;
  const double lx = left + plot_w + 20.0;
  if (raw.size() > 0) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#000000\"/>\n", lx + 10.0, ly);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">data</text>\n", lx + 28.0, ly + 4.0);
    ly += 20.0;
  }
  for (const auto& f : fits) {
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n", lx, ly,
                       lx + 20.0, ly, kind_color(f.kind));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 28.0, ly + 4.0, kind_name(f.kind));
    ly += 20.0;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

inline void render_plot(const RawSeries& raw, const std::vector<PlotCurve>& fits, const std::string& path, std::string_view title = {}) {
  write_text_file(path, plot_svg(raw, fits, title));
}

} // namespace unimodal
