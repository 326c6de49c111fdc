#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/distrib/gaussian.hpp"

namespace claclab::distrib {

/// Running Gaussian-admixture estimate of the stationary action marginal,
/// kept in pre-squash space.
struct MarginalEstimate {
  std::vector<double> mean;
  std::vector<double> variance;
  double learning_rate = 1e-3;
  bool initialized = false;

  MarginalEstimate() = default;
  MarginalEstimate(std::size_t dim, double lr) : mean(dim, 0.0), variance(dim, 0.0), learning_rate(lr) {
    if (!(lr >= 0.0 && lr <= 1.0)) throw InvalidArgument("MarginalEstimate: learning rate must lie in [0, 1]");
  }

  std::size_t dim() const noexcept { return mean.size(); }

  DiagGaussian as_gaussian() const {
    std::vector<double> ls(dim());
    for (std::size_t i = 0; i < dim(); ++i) ls[i] = 0.5 * std::log(variance[i]);
    return DiagGaussian(mean, std::move(ls));
  }

  friend bool operator==(const MarginalEstimate&, const MarginalEstimate&) = default;
};

/// Mixes the component N(mu, var) into the estimate with weight `alpha`.
///
/// mean <- a mu + (1-a) mean
/// var  <- a var_in + (1-a) var + (a mu^2 + (1-a) mean_old^2) - mean_new^2
///
/// The first call on an uninitialized estimate copies the component.
inline void marginal_update(MarginalEstimate& m, std::span<const double> mu, std::span<const double> var, double alpha) {
  if (mu.size() != m.dim() || var.size() != m.dim()) throw InvalidArgument("marginal_update: dimension mismatch");
  for (double v : var) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("marginal_update: variance must be positive");
  }
  if (!m.initialized) {
    m.mean.assign(mu.begin(), mu.end());
    m.variance.assign(var.begin(), var.end());
    m.initialized = true;
    return;
  }
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double old_mean = m.mean[i];
    const double new_mean = alpha * mu[i] + (1.0 - alpha) * old_mean;
    const double second = alpha * mu[i] * mu[i] + (1.0 - alpha) * old_mean * old_mean;
    const double v = alpha * var[i] + (1.0 - alpha) * m.variance[i] + second - new_mean * new_mean;
    m.mean[i] = new_mean;
    m.variance[i] = std::max(v, std::numeric_limits<double>::min());
  }
}

inline void marginal_update(MarginalEstimate& m, const DiagGaussian& d) {
  std::vector<double> var(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) var[i] = d.variance(i);
  marginal_update(m, d.mean(), var, m.learning_rate);
}

/// Gaussian part of the marginal log density at a pre-squash action.
inline double marginal_log_density(const MarginalEstimate& m, std::span<const double> pre_squash) {
  if (!m.initialized) throw PreconditionError("marginal_log_prob: estimator not initialized");
  if (pre_squash.size() != m.dim()) throw InvalidArgument("marginal_log_prob: dimension mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double diff = pre_squash[i] - m.mean[i];
    lp += -0.5 * diff * diff / m.variance[i] - 0.5 * std::log(m.variance[i]) - kHalfLog2Pi;
  }
  return lp;
}

/// Marginal log-prob of the squashed action tanh(pre_squash), with the same
/// tanh correction that sample_squashed applies to the policy log-prob.
inline double marginal_log_prob(const MarginalEstimate& m, std::span<const double> pre_squash) {
  double lp = marginal_log_density(m, pre_squash);
  for (double u : pre_squash) lp += squash_correction(u);
  return lp;
}

/// Per-sample mutual-information contribution log pi(a|s) - log pi_marginal(a).
/// Can be negative for a single sample; only its expectation is nonnegative.
inline double mi_sample_estimate(double policy_log_prob, double marginal_log_prob) {
  return policy_log_prob - marginal_log_prob;
}

}  // namespace claclab::distrib
