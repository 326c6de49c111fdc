#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "claclab/core/format.hpp"
#include "claclab/harness/aggregate.hpp"
#include "claclab/harness/generalization.hpp"

namespace claclab::harness {

// SVG output is plain text with the plotted numbers repeated in data-*
// attributes, so tests can check what was drawn without rasterizing.

namespace detail {

inline const char* series_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  return colors[i % 6];
}

inline std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_double(xs[i]);
  return s;
}

struct Frame {
  double width = 640, height = 400, margin = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
  double py(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

inline std::string fmt_px(double v) { return format_double(std::round(v * 100.0) / 100.0); }

inline std::string svg_open(const Frame& f, const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_px(f.width) + "\" height=\"" + fmt_px(f.height) +
         "\">\n<title>" + title + "</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<line x1=\"" + fmt_px(f.margin) + "\" y1=\"" + fmt_px(f.height - f.margin) + "\" x2=\"" + fmt_px(f.width - f.margin) +
       "\" y2=\"" + fmt_px(f.height - f.margin) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt_px(f.margin) + "\" y1=\"" + fmt_px(f.margin) + "\" x2=\"" + fmt_px(f.margin) + "\" y2=\"" +
       fmt_px(f.height - f.margin) + "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt_px(f.width / 2) + "\" y=\"" + fmt_px(f.height - 10) + "\" text-anchor=\"middle\">" + xlabel + "</text>\n";
  s += "<text x=\"12\" y=\"" + fmt_px(f.height / 2) + "\" transform=\"rotate(-90 12 " + fmt_px(f.height / 2) +
       ")\" text-anchor=\"middle\">" + ylabel + "</text>\n";
  s += "<text x=\"" + fmt_px(f.margin) + "\" y=\"" + fmt_px(f.height - f.margin + 16) + "\">" + format_double(f.x0) + "</text>\n";
  s += "<text x=\"" + fmt_px(f.width - f.margin) + "\" y=\"" + fmt_px(f.height - f.margin + 16) + "\" text-anchor=\"end\">" +
       format_double(f.x1) + "</text>\n";
  s += "<text x=\"" + fmt_px(f.margin - 4) + "\" y=\"" + fmt_px(f.height - f.margin) + "\" text-anchor=\"end\">" +
       format_double(f.y0) + "</text>\n";
  s += "<text x=\"" + fmt_px(f.margin - 4) + "\" y=\"" + fmt_px(f.margin) + "\" text-anchor=\"end\">" + format_double(f.y1) + "</text>\n";
  return s;
}

}  // namespace detail

/// Mean return against env step per algorithm, with a +-1 std band.
inline std::string render_curves_svg(const std::vector<BucketRow>& rows, const std::string& title = "episode return") {
  std::map<std::string, std::vector<const BucketRow*>> series;
  for (const auto& r : rows) series[r.algorithm].push_back(&r);
  detail::Frame f;
  bool first = true;
  for (const auto& r : rows) {
    const double lo = r.stats.mean - r.stats.std, hi = r.stats.mean + r.stats.std;
    const double x = static_cast<double>(r.step_end);
    if (first) {
      f.x0 = f.x1 = x;
      f.y0 = lo;
      f.y1 = hi;
      first = false;
    }
    f.x0 = std::min(f.x0, x);
    f.x1 = std::max(f.x1, x);
    f.y0 = std::min(f.y0, lo);
    f.y1 = std::max(f.y1, hi);
  }
  if (f.x1 == f.x0) f.x1 = f.x0 + 1;
  if (f.y1 == f.y0) f.y1 = f.y0 + 1;

  std::string s = detail::svg_open(f, title) + detail::axes(f, "env step", "return");
  std::size_t idx = 0;
  for (const auto& [alg, pts] : series) {
    std::vector<double> xs, means, stds;
    for (const auto* p : pts) {
      xs.push_back(static_cast<double>(p->step_end));
      means.push_back(p->stats.mean);
      stds.push_back(p->stats.std);
    }
    std::string band, line;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      band += (i ? " L" : "M") + detail::fmt_px(f.px(xs[i])) + "," + detail::fmt_px(f.py(means[i] + stds[i]));
      line += (i ? " L" : "M") + detail::fmt_px(f.px(xs[i])) + "," + detail::fmt_px(f.py(means[i]));
    }
    for (std::size_t i = xs.size(); i-- > 0;) band += " L" + detail::fmt_px(f.px(xs[i])) + "," + detail::fmt_px(f.py(means[i] - stds[i]));
    band += " Z";
    const char* color = detail::series_color(idx);
    s += "<g class=\"series\" data-algorithm=\"" + alg + "\" data-x=\"" + detail::join_numbers(xs) + "\" data-mean=\"" +
         detail::join_numbers(means) + "\" data-std=\"" + detail::join_numbers(stds) + "\">\n";
    s += "<path class=\"band\" d=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    s += "<path class=\"mean\" d=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + detail::fmt_px(f.width - f.margin) + "\" y=\"" + detail::fmt_px(f.margin + 16.0 * static_cast<double>(idx)) +
         "\" text-anchor=\"end\" fill=\"" + color + "\">" + alg + "</text>\n</g>\n";
    ++idx;
  }
  return s + "</svg>\n";
}

struct BarGroup {
  std::string label;                                    // e.g. algorithm
  std::vector<std::pair<std::string, MeanStd>> bars;    // e.g. per regime
};

/// Grouped bars with +-1 std whiskers.
inline std::string render_bars_svg(const std::vector<BarGroup>& groups, const std::string& title = "return by regime") {
  detail::Frame f;
  f.x0 = 0;
  f.x1 = 1;
  f.y0 = 0;
  f.y1 = 0;
  std::size_t n_bars = 0;
  for (const auto& g : groups) {
    for (const auto& [name, m] : g.bars) {
      f.y0 = std::min(f.y0, m.mean - m.std);
      f.y1 = std::max(f.y1, m.mean + m.std);
      ++n_bars;
    }
  }
  if (f.y1 == f.y0) f.y1 = f.y0 + 1;
  std::string s = detail::svg_open(f, title) + detail::axes(f, "", "return");
  const double slot = (f.width - 2 * f.margin) / static_cast<double>(std::max<std::size_t>(1, n_bars + groups.size()));
  double x = f.margin + slot / 2;
  for (const auto& g : groups) {
    s += "<g class=\"group\" data-label=\"" + g.label + "\">\n";
    std::size_t k = 0;
    for (const auto& [name, m] : g.bars) {
      const double top = f.py(std::max(m.mean, 0.0)), bottom = f.py(std::min(m.mean, 0.0));
      s += "<rect class=\"bar\" data-regime=\"" + name + "\" data-mean=\"" + format_double(m.mean) + "\" data-std=\"" +
           format_double(m.std) + "\" x=\"" + detail::fmt_px(x) + "\" y=\"" + detail::fmt_px(top) + "\" width=\"" +
           detail::fmt_px(slot * 0.9) + "\" height=\"" + detail::fmt_px(bottom - top) + "\" fill=\"" + detail::series_color(k) + "\"/>\n";
      const double cx = x + slot * 0.45;
      s += "<line class=\"whisker\" x1=\"" + detail::fmt_px(cx) + "\" y1=\"" + detail::fmt_px(f.py(m.mean - m.std)) + "\" x2=\"" +
           detail::fmt_px(cx) + "\" y2=\"" + detail::fmt_px(f.py(m.mean + m.std)) + "\" stroke=\"black\"/>\n";
      x += slot;
      ++k;
    }
    s += "<text x=\"" + detail::fmt_px(x - slot * (static_cast<double>(k) / 2 + 0.5)) + "\" y=\"" +
         detail::fmt_px(f.height - f.margin + 16) + "\" text-anchor=\"middle\">" + g.label + "</text>\n</g>\n";
    x += slot;
  }
  return s + "</svg>\n";
}

}  // namespace claclab::harness
