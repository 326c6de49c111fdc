#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/format.hpp"

namespace claclab::harness {

/// One logged episode.
struct MetricRow {
  std::string run_id;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t phase = 0;
  std::uint64_t env_step = 0;  // cumulative env steps when the episode ended
  double episode_return = 0.0;
  std::size_t episode_length = 0;
  double mean_mi = 0.0;
  double mean_entropy = 0.0;
  double beta = 0.0;
  double loss_v = 0.0;
  double loss_q = 0.0;
  double loss_pi = 0.0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

inline constexpr const char* kMetricHeader =
    "run_id,algorithm,seed,phase,env_step,episode_return,episode_length,mean_mi,mean_entropy,beta,loss_v,loss_q,loss_pi";

inline std::string to_csv_line(const MetricRow& r) {
  std::string s;
  s += r.run_id + ',' + r.algorithm + ',' + std::to_string(r.seed) + ',' + std::to_string(r.phase) + ',' +
       std::to_string(r.env_step) + ',' + format_double(r.episode_return) + ',' + std::to_string(r.episode_length);
  for (double v : {r.mean_mi, r.mean_entropy, r.beta, r.loss_v, r.loss_q, r.loss_pi}) s += ',' + format_double(v);
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline MetricRow parse_metric_line(const std::string& line) {
  const auto c = split_csv_line(line);
  if (c.size() != 13) throw InvalidArgument("metric row: expected 13 fields, got " + std::to_string(c.size()));
  MetricRow r;
  r.run_id = c[0];
  r.algorithm = c[1];
  r.seed = std::stoull(c[2]);
  r.phase = std::stoull(c[3]);
  r.env_step = std::stoull(c[4]);
  r.episode_return = parse_double(c[5]);
  r.episode_length = std::stoull(c[6]);
  r.mean_mi = parse_double(c[7]);
  r.mean_entropy = parse_double(c[8]);
  r.beta = parse_double(c[9]);
  r.loss_v = parse_double(c[10]);
  r.loss_q = parse_double(c[11]);
  r.loss_pi = parse_double(c[12]);
  return r;
}

/// Append-only per-run CSV. Each row is flushed as it is written so a crash
/// leaves every completed episode on disk.
class MetricWriter {
 public:
  explicit MetricWriter(const std::filesystem::path& path) : os_(path, std::ios::binary | std::ios::trunc) {
    if (!os_) throw std::runtime_error("cannot open metric file " + path.string());
    os_ << kMetricHeader << '\n';
    os_.flush();
  }

  void append(const MetricRow& row) {
    os_ << to_csv_line(row) << '\n';
    os_.flush();
  }

 private:
  std::ofstream os_;
};

inline std::vector<MetricRow> read_metric_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read metric file " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kMetricHeader) throw InvalidArgument(path.string() + ": not a metric file");
  std::vector<MetricRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(parse_metric_line(line));
  }
  return rows;
}

inline void write_metric_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
  MetricWriter w(path);
  for (const auto& r : rows) w.append(r);
}

}  // namespace claclab::harness
