#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/format.hpp"
#include "claclab/harness/metrics.hpp"

namespace claclab::harness {

struct MeanStd {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  double stderr_mean() const { return n > 0 ? std / std::sqrt(static_cast<double>(n)) : 0.0; }
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.n = xs.size();
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

/// One run's episodes, as read back from its metric file.
using RunRows = std::vector<MetricRow>;

struct BucketRow {
  std::string algorithm;
  std::uint64_t step_end = 0;  // bucket covers (step_end - width, step_end]
  MeanStd stats;               // across runs of the per-run bucket mean return
};

struct PhaseWindowRow {
  std::string algorithm;
  std::size_t phase = 0;
  MeanStd stats;  // across runs of the per-run final-window mean return
};

struct Summary {
  std::vector<BucketRow> buckets;
  std::vector<PhaseWindowRow> phase_windows;
};

inline std::uint64_t bucket_end(std::uint64_t env_step, std::uint64_t width) {
  return ((env_step + width - 1) / width) * width;
}

/// Per (algorithm, env-step bucket): mean and sample std of return across runs,
/// where each run contributes its mean return over episodes ending in the
/// bucket. Per (algorithm, phase): the same over episodes ending in the last
/// `window_fraction` of the phase.
inline Summary aggregate(const std::vector<RunRows>& runs, std::uint64_t bucket_width, std::uint64_t phase_length,
                         double window_fraction = 0.1) {
  if (runs.empty()) throw InvalidArgument("aggregate: no runs");
  if (bucket_width == 0 || phase_length == 0) throw InvalidArgument("aggregate: bucket width and phase length must be positive");
  std::map<std::pair<std::string, std::uint64_t>, std::vector<double>> per_bucket;
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> per_phase;
  const auto window = static_cast<std::uint64_t>(std::ceil(window_fraction * static_cast<double>(phase_length)));

  for (const auto& rows : runs) {
    std::map<std::pair<std::string, std::uint64_t>, std::pair<double, std::size_t>> b;
    std::map<std::pair<std::string, std::size_t>, std::pair<double, std::size_t>> p;
    for (const auto& r : rows) {
      auto& cell = b[{r.algorithm, bucket_end(r.env_step, bucket_width)}];
      cell.first += r.episode_return;
      ++cell.second;
      const std::uint64_t phase_end = (r.phase + 1) * phase_length;
      if (r.env_step + window > phase_end) {
        auto& pc = p[{r.algorithm, r.phase}];
        pc.first += r.episode_return;
        ++pc.second;
      }
    }
    for (const auto& [key, v] : b) per_bucket[key].push_back(v.first / static_cast<double>(v.second));
    for (const auto& [key, v] : p) per_phase[key].push_back(v.first / static_cast<double>(v.second));
  }

  Summary s;
  for (const auto& [key, xs] : per_bucket) s.buckets.push_back({key.first, key.second, mean_std(xs)});
  for (const auto& [key, xs] : per_phase) s.phase_windows.push_back({key.first, key.second, mean_std(xs)});
  return s;
}

inline constexpr const char* kBucketHeader = "algorithm,step_end,n,mean_return,std_return";
inline constexpr const char* kPhaseHeader = "algorithm,phase,n,mean_return,std_return,stderr_return";

inline void write_summary_csv(const std::filesystem::path& dir, const Summary& s) {
  std::filesystem::create_directories(dir);
  std::ofstream b(dir / "summary_buckets.csv", std::ios::binary | std::ios::trunc);
  b << kBucketHeader << '\n';
  for (const auto& r : s.buckets) {
    b << r.algorithm << ',' << r.step_end << ',' << r.stats.n << ',' << format_double(r.stats.mean) << ','
      << format_double(r.stats.std) << '\n';
  }
  std::ofstream p(dir / "summary_phases.csv", std::ios::binary | std::ios::trunc);
  p << kPhaseHeader << '\n';
  for (const auto& r : s.phase_windows) {
    p << r.algorithm << ',' << r.phase << ',' << r.stats.n << ',' << format_double(r.stats.mean) << ','
      << format_double(r.stats.std) << ',' << format_double(r.stats.stderr_mean()) << '\n';
  }
}

/// Every *.csv metric file in `dir`, in file-name order.
inline std::vector<RunRows> read_metric_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InvalidArgument(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRows> runs;
  for (const auto& f : files) runs.push_back(read_metric_csv(f));
  return runs;
}

}  // namespace claclab::harness
