#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "claclab/agents/config.hpp"
#include "claclab/agents/network_set.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/distrib/gaussian.hpp"
#include "claclab/distrib/marginal.hpp"
#include "claclab/ndiff/mlp.hpp"
#include "claclab/replay/replay_buffer.hpp"

namespace claclab::agents {

using ndiff::Tensor;

// CLAC and MIRL regularize with the MI sample, SAC with the log-prob alone.
inline bool uses_marginal(Algorithm a) { return a != Algorithm::SAC; }

/// Value target for one sample.
///   CLAC/MIRL: q_min - beta (log_pi - log_marg)
///   SAC:       q_min - alpha log_pi
inline double compute_value_target(double q_min, double log_pi, double log_marg, Algorithm algorithm, double coefficient) {
  const double penalty = uses_marginal(algorithm) ? distrib::mi_sample_estimate(log_pi, log_marg) : log_pi;
  return q_min - coefficient * penalty;
}

inline double compute_value_target(double q_min, double log_pi, double log_marg, const AgentConfig& cfg) {
  return compute_value_target(q_min, log_pi, log_marg, cfg.algorithm, cfg.coefficient);
}

inline Tensor concat_columns(const Tensor& a, const Tensor& b) {
  Tensor out = Tensor::matrix(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = out.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), row.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), row.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

/// Policy evaluated on a batch of states with fixed standard-normal noise.
struct PolicyPass {
  ndiff::ForwardCache cache;
  Tensor raw;          // (B, 2k) network output
  Tensor pre_squash;   // (B, k)  mean + std * noise
  Tensor actions;      // (B, k)  tanh(pre_squash)
  std::vector<double> log_pi;
  std::vector<double> entropy;  // pre-squash Gaussian entropy per sample
};

inline PolicyPass evaluate_policy(const ndiff::Mlp& policy, const Tensor& states, const Tensor& noise) {
  PolicyPass p;
  p.raw = ndiff::forward(policy, states, p.cache);
  const std::size_t b = p.raw.rows();
  const std::size_t k = p.raw.cols() / 2;
  if (noise.rows() != b || noise.cols() != k) throw InvalidArgument("evaluate_policy: noise shape mismatch");
  p.pre_squash = Tensor::matrix(b, k);
  p.actions = Tensor::matrix(b, k);
  p.log_pi.assign(b, 0.0);
  p.entropy.assign(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double mean = p.raw(i, j);
      const double log_std = distrib::clamp_log_std(p.raw(i, k + j));
      const double u = mean + std::exp(log_std) * noise(i, j);
      p.pre_squash(i, j) = u;
      p.actions(i, j) = std::tanh(u);
      p.log_pi[i] += distrib::normal_log_density(u, mean, log_std) + distrib::squash_correction(u);
      p.entropy[i] += log_std + distrib::kHalfLog2Pi + 0.5;
    }
  }
  return p;
}

inline std::vector<double> marginal_log_probs(const distrib::MarginalEstimate& m, const Tensor& pre_squash) {
  std::vector<double> out(pre_squash.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = distrib::marginal_log_prob(m, pre_squash.row(i));
  return out;
}

struct LossGrad {
  double loss = 0.0;
  ndiff::Grads grads;
};

/// Value loss 0.5 * mean (V(s) - target)^2 and its gradient in the value
/// parameters. Targets use fresh policy samples drawn with `noise`.
inline LossGrad value_loss_grad(const NetworkSet& nets, const replay::Batch& batch, const distrib::MarginalEstimate& marginal,
                                Algorithm algorithm, double coefficient, const Tensor& noise) {
  const std::size_t b = batch.size();
  const PolicyPass pi = evaluate_policy(nets.policy, batch.states, noise);
  const Tensor sa = concat_columns(batch.states, pi.actions);
  const Tensor q1 = ndiff::forward(nets.q1, sa);
  const Tensor q2 = ndiff::forward(nets.q2, sa);
  std::vector<double> log_marg(b, 0.0);
  if (uses_marginal(algorithm)) log_marg = marginal_log_probs(marginal, pi.pre_squash);

  ndiff::ForwardCache cache;
  const Tensor v = ndiff::forward(nets.value, batch.states, cache);
  Tensor upstream = Tensor::matrix(b, 1);
  LossGrad out;
  for (std::size_t i = 0; i < b; ++i) {
    const double q_min = std::min(q1[i], q2[i]);
    const double target = compute_value_target(q_min, pi.log_pi[i], log_marg[i], algorithm, coefficient);
    const double residual = v[i] - target;
    out.loss += 0.5 * residual * residual / static_cast<double>(b);
    upstream[i] = residual / static_cast<double>(b);
  }
  out.grads = ndiff::backward(nets.value, cache, upstream).grads;
  return out;
}

/// Bellman targets r + gamma (1 - done) V_target(s').
inline std::vector<double> q_targets(const NetworkSet& nets, const replay::Batch& batch, double gamma) {
  const Tensor v_next = ndiff::forward(nets.value_target, batch.next_states);
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = batch.rewards[i] + gamma * (1.0 - batch.dones[i]) * v_next[i];
  return y;
}

/// Loss and gradient of one Q network toward fixed Bellman targets.
inline LossGrad q_loss_grad(const ndiff::Mlp& q, const replay::Batch& batch, const std::vector<double>& targets) {
  const std::size_t b = batch.size();
  ndiff::ForwardCache cache;
  const Tensor out_q = ndiff::forward(q, concat_columns(batch.states, batch.actions), cache);
  Tensor upstream = Tensor::matrix(b, 1);
  LossGrad out;
  for (std::size_t i = 0; i < b; ++i) {
    const double residual = out_q[i] - targets[i];
    out.loss += 0.5 * residual * residual / static_cast<double>(b);
    upstream[i] = residual / static_cast<double>(b);
  }
  out.grads = ndiff::backward(q, cache, upstream).grads;
  return out;
}

struct PolicyLossGrad {
  double loss = 0.0;
  ndiff::Grads grads;
  double mean_mi = 0.0;       // mean of log_pi - log_marg (0 when no marginal yet)
  double mean_entropy = 0.0;
};

/// Reparameterized policy objective
///   CLAC/MIRL: mean[beta (log pi(a|s) - log pi_marg(a)) - min(Q1, Q2)(s, a)]
///   SAC:       mean[alpha log pi(a|s) - min(Q1, Q2)(s, a)]
/// with a = tanh(mean + std * noise). The marginal's moments are constants;
/// the action still carries gradient through log pi_marg(a) and Q.
inline PolicyLossGrad policy_loss_grad(const NetworkSet& nets, const replay::Batch& batch,
                                       const distrib::MarginalEstimate& marginal, Algorithm algorithm, double coefficient,
                                       const Tensor& noise) {
  const std::size_t b = batch.size();
  const std::size_t k = nets.act_dim;
  const double inv_b = 1.0 / static_cast<double>(b);
  const PolicyPass pi = evaluate_policy(nets.policy, batch.states, noise);
  const Tensor sa = concat_columns(batch.states, pi.actions);
  ndiff::ForwardCache c1, c2;
  const Tensor q1 = ndiff::forward(nets.q1, sa, c1);
  const Tensor q2 = ndiff::forward(nets.q2, sa, c2);

  const bool with_marginal = uses_marginal(algorithm) || marginal.initialized;
  std::vector<double> log_marg(b, 0.0);
  if (with_marginal) log_marg = marginal_log_probs(marginal, pi.pre_squash);

  PolicyLossGrad out;
  Tensor up1 = Tensor::matrix(b, 1);
  Tensor up2 = Tensor::matrix(b, 1);
  for (std::size_t i = 0; i < b; ++i) {
    const bool first = q1[i] <= q2[i];
    const double q_min = first ? q1[i] : q2[i];
    (first ? up1 : up2)[i] = -inv_b;
    const double penalty = uses_marginal(algorithm) ? pi.log_pi[i] - log_marg[i] : pi.log_pi[i];
    out.loss += (coefficient * penalty - q_min) * inv_b;
    if (with_marginal) out.mean_mi += (pi.log_pi[i] - log_marg[i]) * inv_b;
    out.mean_entropy += pi.entropy[i] * inv_b;
  }
  // dLoss/da through the selected critic.
  const Tensor dq1 = ndiff::backward(nets.q1, c1, up1, false).input_grad;
  const Tensor dq2 = ndiff::backward(nets.q2, c2, up2, false).input_grad;

  Tensor upstream = Tensor::matrix(b, 2 * k);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double u = pi.pre_squash(i, j);
      const double t = pi.actions(i, j);
      const double raw_log_std = pi.raw(i, k + j);
      const double log_std = distrib::clamp_log_std(raw_log_std);
      const double stddev = std::exp(log_std);
      const double eta = noise(i, j);

      const double dloss_da = dq1(i, nets.obs_dim + j) + dq2(i, nets.obs_dim + j);
      const double dlogpi_du = distrib::squash_correction_grad(u);
      double dpenalty_du = dlogpi_du;
      if (uses_marginal(algorithm)) {
        const double dlogmarg_du = -(u - marginal.mean[j]) / marginal.variance[j] + distrib::squash_correction_grad(u);
        dpenalty_du = dlogpi_du - dlogmarg_du;
      }
      const double g_u = dloss_da * (1.0 - t * t) + coefficient * dpenalty_du * inv_b;
      // log pi also depends on log_std directly through its -log_std term.
      const double g_log_std = g_u * stddev * eta - coefficient * inv_b;
      const bool inside = raw_log_std > distrib::kLogStdMin && raw_log_std < distrib::kLogStdMax;
      upstream(i, j) = g_u;
      upstream(i, k + j) = inside ? g_log_std : 0.0;
    }
  }
  out.grads = ndiff::backward(nets.policy, pi.cache, upstream).grads;
  return out;
}

}  // namespace claclab::agents
