#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/format.hpp"
#include "claclab/harness/aggregate.hpp"
#include "claclab/harness/experiment.hpp"

namespace claclab::harness {

/// Parses "lo:hi:step" (inclusive of hi when it lies on the lattice) or a
/// comma list "0,0.5,1". Points are lo + i*step, so there is no accumulated drift.
inline std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw InvalidArgument("grid: empty");
  std::vector<double> out;
  if (text.find(':') == std::string::npos) {
    for (const auto& cell : split_csv_line(text)) out.push_back(parse_double(cell));
  } else {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1) {
      parts.push_back(text.substr(start, pos - start));
    }
    parts.push_back(text.substr(start));
    if (parts.size() != 3) throw InvalidArgument("grid: expected lo:hi:step, got '" + text + "'");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument("grid: need step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  if (out.empty()) throw InvalidArgument("grid: no points");
  return out;
}

struct SweepPoint {
  double coefficient = 0.0;
  double score = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // every evaluated point, all rounds
  double best = 0.0;
  double best_score = 0.0;
};

using SweepEvaluator = std::function<double(double coefficient)>;

/// Grid maximum of the evaluator; the earliest point wins ties.
inline SweepResult coefficient_sweep(const std::vector<double>& grid, const SweepEvaluator& evaluate) {
  if (grid.empty()) throw InvalidArgument("sweep: empty grid");
  SweepResult r;
  for (double c : grid) {
    const double s = evaluate(c);
    r.points.push_back({c, s});
    if (r.points.size() == 1 || s > r.best_score) {
      r.best = c;
      r.best_score = s;
    }
  }
  return r;
}

/// Coarse grid first, then `rounds` finer grids spanning one coarse step either
/// side of the incumbent at a fifth of the spacing. Coefficients stay >= 0.
inline SweepResult refined_sweep(const std::vector<double>& grid, const SweepEvaluator& evaluate, std::size_t rounds) {
  SweepResult r = coefficient_sweep(grid, evaluate);
  double spacing = grid.size() > 1 ? std::abs(grid[1] - grid[0]) : 0.0;
  for (std::size_t k = 0; k < rounds && spacing > 0.0; ++k) {
    const double fine = spacing / 5.0;
    std::vector<double> window;
    for (int i = -5; i <= 5; ++i) {
      const double c = r.best + i * fine;
      if (c < 0.0 || i == 0) continue;
      window.push_back(c);
    }
    const SweepResult w = coefficient_sweep(window, evaluate);
    r.points.insert(r.points.end(), w.points.begin(), w.points.end());
    if (w.best_score > r.best_score) {
      r.best = w.best;
      r.best_score = w.best_score;
    }
    spacing = fine;
  }
  return r;
}

/// Mean final-window return of `spec.n_agents` agents trained with the given
/// coefficient on the non-resampled task.
inline SweepEvaluator training_evaluator(ExperimentSpec spec, Algorithm algorithm, std::size_t workers) {
  spec.algorithms = {algorithm};
  spec.resample_interval = 0;
  return [spec, algorithm, workers](double c) mutable {
    spec.coefficients[algorithm] = c;
    spec.run_tag = "c" + format_double(c) + "-";
    std::vector<RunRows> rows;
    for (auto& r : run_training(spec, workers)) rows.push_back(std::move(r.rows));
    const Summary s = aggregate(rows, spec.phase_length(), spec.phase_length());
    return s.phase_windows.empty() ? -INFINITY : s.phase_windows.front().stats.mean;
  };
}

}  // namespace claclab::harness
