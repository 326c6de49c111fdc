#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "claclab/agents/config.hpp"
#include "claclab/agents/losses.hpp"
#include "claclab/agents/network_set.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/distrib/gaussian.hpp"
#include "claclab/distrib/marginal.hpp"
#include "claclab/envs/env.hpp"
#include "claclab/ndiff/optim.hpp"
#include "claclab/replay/replay_buffer.hpp"

namespace claclab::agents {

enum class ActKind { Stochastic, Deterministic, Mirl };

struct ActMode {
  ActKind kind = ActKind::Stochastic;
  double epsilon = 0.0;                          // Mirl only
  MirlExploit exploit = MirlExploit::Greedy;     // Mirl only

  static ActMode stochastic() { return {}; }
  static ActMode deterministic() { return {ActKind::Deterministic, 0.0, MirlExploit::Greedy}; }
  static ActMode mirl(double epsilon, MirlExploit exploit = MirlExploit::Greedy) { return {ActKind::Mirl, epsilon, exploit}; }
};

struct ActResult {
  std::vector<double> action;
  std::vector<double> pre_squash;
  distrib::DiagGaussian policy;  // the state-conditional pre-squash Gaussian
  bool from_marginal = false;
  bool marginal_missing = false;  // mirl mode fell back to sampling the policy
};

inline distrib::DiagGaussian policy_distribution(const NetworkSet& nets, std::span<const double> state) {
  if (state.size() != nets.obs_dim) throw InvalidArgument("act: state dimension mismatch");
  const Tensor out = ndiff::forward(nets.policy, Tensor({1, nets.obs_dim}, std::vector<double>(state.begin(), state.end())));
  const std::size_t k = nets.act_dim;
  std::vector<double> mean(out.values().begin(), out.values().begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<double> log_std(out.values().begin() + static_cast<std::ptrdiff_t>(k), out.values().end());
  return distrib::DiagGaussian(std::move(mean), std::move(log_std));
}

/// Chooses an action for one state.
///
/// Policy noise comes from `rng`. The mirl coin and marginal draws come from
/// `explore_rng`, so an epsilon of zero leaves `rng` consumed exactly as in
/// stochastic mode.
inline ActResult act(const NetworkSet& nets, const distrib::MarginalEstimate& marginal, std::span<const double> state,
                     ActMode mode, Rng& rng, Rng& explore_rng) {
  ActResult r;
  r.policy = policy_distribution(nets, state);
  const std::size_t k = nets.act_dim;
  auto from_policy = [&] {
    std::vector<double> noise(k);
    for (auto& z : noise) z = rng.normal();
    auto s = distrib::sample_squashed(r.policy, noise);
    r.action = std::move(s.action);
    r.pre_squash = std::move(s.pre_squash);
  };
  auto greedy = [&] {
    r.pre_squash = r.policy.mean();
    r.action.resize(k);
    for (std::size_t j = 0; j < k; ++j) r.action[j] = std::tanh(r.pre_squash[j]);
  };

  switch (mode.kind) {
    case ActKind::Stochastic:
      from_policy();
      break;
    case ActKind::Deterministic:
      greedy();
      break;
    case ActKind::Mirl: {
      if (!(mode.epsilon >= 0.0 && mode.epsilon <= 1.0)) throw InvalidArgument("act: mirl epsilon must lie in [0, 1]");
      if (!marginal.initialized) {
        r.marginal_missing = true;
        from_policy();
        break;
      }
      if (explore_rng.uniform() < mode.epsilon) {
        r.from_marginal = true;
        r.pre_squash.resize(k);
        r.action.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
          r.pre_squash[j] = marginal.mean[j] + std::sqrt(marginal.variance[j]) * explore_rng.normal();
          r.action[j] = std::tanh(r.pre_squash[j]);
        }
      } else if (mode.exploit == MirlExploit::Greedy) {
        greedy();
      } else {
        from_policy();
      }
      break;
    }
  }
  return r;
}

inline Tensor standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t = Tensor::matrix(rows, cols);
  for (double& x : t.values()) x = rng.normal();
  return t;
}

inline void require_finite(double loss, const char* what) {
  if (!std::isfinite(loss)) throw TrainingDivergence(std::string(what) + " loss is not finite");
}

struct PolicyUpdate {
  double loss = 0.0;
  double mean_mi = 0.0;
  double mean_entropy = 0.0;
};

inline double update_value(NetworkSet& nets, const replay::Batch& batch, const distrib::MarginalEstimate& marginal,
                           Algorithm algorithm, double coefficient, Rng& rng) {
  const Tensor noise = standard_normal(batch.size(), nets.act_dim, rng);
  auto lg = value_loss_grad(nets, batch, marginal, algorithm, coefficient, noise);
  require_finite(lg.loss, "value");
  ndiff::adam_step(nets.value, lg.grads, nets.value_opt);
  return lg.loss;
}

/// Steps both critics toward the same Bellman targets; returns their mean loss.
inline double update_q(NetworkSet& nets, const replay::Batch& batch, double gamma) {
  const auto y = q_targets(nets, batch, gamma);
  auto l1 = q_loss_grad(nets.q1, batch, y);
  auto l2 = q_loss_grad(nets.q2, batch, y);
  require_finite(l1.loss, "q1");
  require_finite(l2.loss, "q2");
  ndiff::adam_step(nets.q1, l1.grads, nets.q1_opt);
  ndiff::adam_step(nets.q2, l2.grads, nets.q2_opt);
  return 0.5 * (l1.loss + l2.loss);
}

inline PolicyUpdate update_policy(NetworkSet& nets, const replay::Batch& batch, const distrib::MarginalEstimate& marginal,
                                  Algorithm algorithm, double coefficient, Rng& rng) {
  const Tensor noise = standard_normal(batch.size(), nets.act_dim, rng);
  auto lg = policy_loss_grad(nets, batch, marginal, algorithm, coefficient, noise);
  require_finite(lg.loss, "policy");
  ndiff::adam_step(nets.policy, lg.grads, nets.policy_opt);
  return {lg.loss, lg.mean_mi, lg.mean_entropy};
}

/// What happened during one environment step (and its gradient steps).
struct StepInfo {
  double reward = 0.0;
  bool episode_done = false;
  bool terminal = false;
  bool updated = false;
  double loss_v = 0.0;
  double loss_q = 0.0;
  double loss_pi = 0.0;
  double mean_mi = 0.0;       // from the last policy update
  double mean_entropy = 0.0;
  double step_mi = 0.0;       // log pi - log marg of the action just taken
  double coefficient = 0.0;   // beta (or alpha) in force for this step
};

class Agent {
 public:
  Agent() = default;
  Agent(AgentConfig cfg, std::size_t obs_dim, std::size_t act_dim, std::uint64_t seed)
      : cfg_(std::move(cfg)),
        rng_(derive_seed(seed, SeedStream::Agent)),
        explore_rng_(derive_seed(seed, SeedStream::Exploration)),
        marginal_(act_dim, 0.0) {
    cfg_.validate();
    marginal_.learning_rate = cfg_.marginal_lr;
    nets_ = NetworkSet::create(obs_dim, act_dim, cfg_, rng_);
    if (cfg_.target_capacity) beta_ = BetaController(cfg_.coefficient, *cfg_.target_capacity, cfg_.beta_lr);
    mirl_.beta0 = cfg_.coefficient;
    mirl_.epsilon0 = cfg_.mirl_epsilon;
    mirl_.horizon = cfg_.mirl_horizon;
  }

  const AgentConfig& config() const noexcept { return cfg_; }
  NetworkSet& nets() noexcept { return nets_; }
  const NetworkSet& nets() const noexcept { return nets_; }
  distrib::MarginalEstimate& marginal() noexcept { return marginal_; }
  const distrib::MarginalEstimate& marginal() const noexcept { return marginal_; }
  BetaController& beta_controller() noexcept { return beta_; }
  const BetaController& beta_controller() const noexcept { return beta_; }
  MirlSchedule& mirl_schedule() noexcept { return mirl_; }
  const MirlSchedule& mirl_schedule() const noexcept { return mirl_; }
  Rng& rng() noexcept { return rng_; }
  const Rng& rng() const noexcept { return rng_; }
  Rng& explore_rng() noexcept { return explore_rng_; }
  const Rng& explore_rng() const noexcept { return explore_rng_; }
  std::uint64_t env_steps() const noexcept { return env_steps_; }
  std::uint64_t gradient_steps() const noexcept { return grad_steps_; }
  void set_counters(std::uint64_t env_steps, std::uint64_t grad_steps) {
    env_steps_ = env_steps;
    grad_steps_ = grad_steps;
  }

  /// beta for CLAC and MIRL, alpha for SAC, at the current step.
  double coefficient() const {
    switch (cfg_.algorithm) {
      case Algorithm::CLAC:
        return cfg_.target_capacity ? beta_.beta() : cfg_.coefficient;
      case Algorithm::MIRL:
        return mirl_.beta();
      case Algorithm::SAC:
        break;
    }
    return cfg_.coefficient;
  }

  ActMode training_mode() const {
    if (cfg_.algorithm == Algorithm::MIRL) return ActMode::mirl(mirl_.epsilon(), cfg_.mirl_exploit);
    return ActMode::stochastic();
  }

  ActResult act(std::span<const double> state, ActMode mode) {
    return agents::act(nets_, marginal_, state, mode, rng_, explore_rng_);
  }

  std::vector<double> act_deterministic(std::span<const double> state) const {
    const auto d = policy_distribution(nets_, state);
    std::vector<double> a(d.dim());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::tanh(d.mean()[j]);
    return a;
  }

  /// One environment step followed by the configured gradient steps.
  /// An env that is already done is reset first.
  template <envs::Environment E>
  StepInfo train_step(E& env, replay::ReplayBuffer& buffer) {
    if (env.state().done) env.reset();
    const std::vector<double> s = env.state().observation;
    StepInfo info;
    info.coefficient = coefficient();

    ActResult a = act(s, training_mode());
    const auto step = env.step(a.action);
    marginal_update(marginal_, a.policy);
    if (marginal_.initialized) {
      info.step_mi = distrib::gaussian_log_prob(a.policy, a.pre_squash) - distrib::marginal_log_density(marginal_, a.pre_squash);
    }
    info.reward = step.reward;
    info.episode_done = step.state.done;
    info.terminal = step.state.terminal;
    buffer.push({s, a.action, a.pre_squash, step.reward, step.state.observation, step.state.terminal});
    ++env_steps_;
    if (cfg_.algorithm == Algorithm::MIRL) mirl_.advance();

    if (env_steps_ >= cfg_.learning_starts && !buffer.empty()) {
      for (std::size_t g = 0; g < cfg_.gradient_steps; ++g) gradient_step(buffer, info);
    }
    return info;
  }

  void gradient_step(const replay::ReplayBuffer& buffer, StepInfo& info) {
    const auto batch = buffer.sample_batch(cfg_.batch_size, rng_);
    const double c = coefficient();
    info.loss_v = update_value(nets_, batch, marginal_, cfg_.algorithm, c, rng_);
    info.loss_q = update_q(nets_, batch, cfg_.gamma);
    const auto p = update_policy(nets_, batch, marginal_, cfg_.algorithm, c, rng_);
    info.loss_pi = p.loss;
    info.mean_mi = p.mean_mi;
    info.mean_entropy = p.mean_entropy;
    info.updated = true;
    if (cfg_.algorithm == Algorithm::CLAC && cfg_.target_capacity) update_beta(beta_, p.mean_mi);
    ++grad_steps_;
    if (grad_steps_ % cfg_.target_update_interval == 0) ndiff::polyak_update(nets_.value_target, nets_.value, cfg_.tau);
  }

 private:
  AgentConfig cfg_;
  Rng rng_;
  Rng explore_rng_;
  NetworkSet nets_;
  distrib::MarginalEstimate marginal_;
  BetaController beta_;
  MirlSchedule mirl_;
  std::uint64_t env_steps_ = 0;
  std::uint64_t grad_steps_ = 0;
};

}  // namespace claclab::agents
