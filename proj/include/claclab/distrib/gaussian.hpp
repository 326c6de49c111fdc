#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "claclab/core/errors.hpp"

namespace claclab::distrib {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEpsilon = 1e-6;
inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)

inline double clamp_log_std(double log_std) { return std::clamp(log_std, kLogStdMin, kLogStdMax); }

// Log density of N(mean, exp(log_std)^2) at x, one dimension.
inline double normal_log_density(double x, double mean, double log_std) {
  const double z = (x - mean) * std::exp(-log_std);
  return -0.5 * z * z - log_std - kHalfLog2Pi;
}

// -ln(1 - tanh(u)^2 + eps): log-Jacobian correction of a = tanh(u).
inline double squash_correction(double pre_squash) {
  const double t = std::tanh(pre_squash);
  return -std::log(1.0 - t * t + kSquashEpsilon);
}

// d/du of squash_correction.
inline double squash_correction_grad(double pre_squash) {
  const double t = std::tanh(pre_squash);
  const double one_minus = 1.0 - t * t;
  return 2.0 * t * one_minus / (one_minus + kSquashEpsilon);
}

/// Diagonal Gaussian over pre-squash actions. log_std is clamped on entry.
class DiagGaussian {
 public:
  DiagGaussian() = default;
  DiagGaussian(std::vector<double> mean, std::vector<double> log_std) : mean_(std::move(mean)), log_std_(std::move(log_std)) {
    if (mean_.size() != log_std_.size()) throw InvalidArgument("DiagGaussian: mean/log_std dimensions differ");
    for (double& s : log_std_) s = clamp_log_std(s);
  }

  std::size_t dim() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& log_std() const noexcept { return log_std_; }
  double stddev(std::size_t i) const { return std::exp(log_std_[i]); }
  double variance(std::size_t i) const { return std::exp(2.0 * log_std_[i]); }

  friend bool operator==(const DiagGaussian&, const DiagGaussian&) = default;

 private:
  std::vector<double> mean_;
  std::vector<double> log_std_;
};

/// Differential entropy in nats: sum over dims of 0.5 ln(2 pi e sigma^2).
inline double gaussian_entropy(const DiagGaussian& d) {
  double h = 0.0;
  for (double ls : d.log_std()) h += ls + kHalfLog2Pi + 0.5;
  return h;
}

inline double gaussian_log_prob(const DiagGaussian& d, std::span<const double> x) {
  if (x.size() != d.dim()) throw InvalidArgument("gaussian_log_prob: dimension mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) lp += normal_log_density(x[i], d.mean()[i], d.log_std()[i]);
  return lp;
}

struct SquashedSample {
  std::vector<double> action;      // tanh(pre_squash), in (-1, 1)^k
  std::vector<double> pre_squash;  // mean + std * noise
  double log_prob = 0.0;           // log density of `action`
};

/// Reparameterized sample a = tanh(mean + std * noise) with change-of-variables log-prob.
inline SquashedSample sample_squashed(const DiagGaussian& d, std::span<const double> noise) {
  if (noise.size() != d.dim()) throw InvalidArgument("sample_squashed: noise dimension mismatch");
  SquashedSample s;
  s.action.resize(d.dim());
  s.pre_squash.resize(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) {
    const double u = d.mean()[i] + d.stddev(i) * noise[i];
    s.pre_squash[i] = u;
    s.action[i] = std::tanh(u);
    s.log_prob += normal_log_density(u, d.mean()[i], d.log_std()[i]) + squash_correction(u);
  }
  return s;
}

}  // namespace claclab::distrib
