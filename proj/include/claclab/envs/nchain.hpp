#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/envs/env.hpp"

namespace claclab::envs {

struct NChainParams {
  std::size_t n_states = 5;
  std::vector<double> hidden_values;  // one per non-terminal state, each in (0, 1)
  double beta_a = 10.0;
  double beta_b = 25.0;
  std::size_t max_episode_steps = 200;
  double sharpness = 10.0;  // c in p_adv = exp(-c |a - H_s|)

  void validate() const {
    if (n_states < 2) throw InvalidArgument("nchain: n_states must be at least 2");
    if (hidden_values.size() != n_states - 1) {
      throw InvalidArgument("nchain: expected " + std::to_string(n_states - 1) + " hidden values, got " +
                            std::to_string(hidden_values.size()));
    }
    for (double h : hidden_values) {
      if (!(h > 0.0 && h < 1.0)) throw InvalidArgument("nchain: hidden values must lie in (0, 1)");
    }
    if (!(beta_a > 0.0 && beta_b > 0.0)) throw InvalidArgument("nchain: Beta shape parameters must be positive");
    if (max_episode_steps == 0) throw InvalidArgument("nchain: max_episode_steps must be positive");
    if (!(sharpness > 0.0)) throw InvalidArgument("nchain: sharpness must be positive");
  }

  friend bool operator==(const NChainParams&, const NChainParams&) = default;
};

// Draws every hidden value from Beta(beta_a, beta_b).
inline NChainParams nchain_default_params(std::uint64_t seed) {
  NChainParams p;
  Rng rng(seed);
  p.hidden_values.resize(p.n_states - 1);
  for (double& h : p.hidden_values) h = rng.beta(p.beta_a, p.beta_b);
  return p;
}

// Agent actions live in [-1, 1]; the chain reads them on [0, 1].
inline double nchain_rescale_action(double action) { return (std::clamp(action, -1.0, 1.0) + 1.0) * 0.5; }

inline double nchain_advance_probability(double action01, double hidden, double sharpness) {
  return std::exp(-sharpness * std::abs(action01 - hidden));
}

/// Continuous-action chain: start in S1, reach S_N to finish. Reward -1 per
/// step, 0 on the step that enters the terminal state.
class NChain {
 public:
  explicit NChain(NChainParams params, std::uint64_t seed = 0) : params_(std::move(params)), rng_(seed) {
    params_.validate();
    reset(seed);
  }

  static constexpr const char* name() { return "nchain"; }
  std::size_t observation_dim() const noexcept { return params_.n_states; }
  std::size_t action_dim() const noexcept { return 1; }
  const NChainParams& params() const noexcept { return params_; }
  void set_params(NChainParams params) {
    params.validate();
    if (params.n_states != params_.n_states) throw InvalidArgument("nchain: cannot change n_states in place");
    params_ = std::move(params);
  }

  std::size_t position() const noexcept { return position_; }
  const EnvState& state() const noexcept { return state_; }

  EnvState reset(std::uint64_t seed) {
    rng_ = Rng(seed);
    return reset();
  }

  EnvState reset() {
    position_ = 0;
    state_ = EnvState{one_hot(0), 0, false, false};
    return state_;
  }

  StepResult step(std::span<const double> action) {
    if (state_.done) throw ContractViolation("nchain: step after episode end");
    if (action.size() != 1) throw InvalidArgument("nchain: action must be 1-dimensional");
    const double a01 = nchain_rescale_action(action[0]);
    const double p = nchain_advance_probability(a01, params_.hidden_values[position_], params_.sharpness);
    if (rng_.uniform() < p) ++position_;
    double reward = -1.0;
    state_.step_index += 1;
    state_.observation = one_hot(position_);
    if (position_ == params_.n_states - 1) {
      reward = 0.0;
      state_.done = true;
      state_.terminal = true;
    } else if (state_.step_index >= params_.max_episode_steps) {
      state_.done = true;
    }
    return {state_, reward};
  }

 private:
  std::vector<double> one_hot(std::size_t index) const {
    std::vector<double> obs(params_.n_states, 0.0);
    obs[index] = 1.0;
    return obs;
  }

  NChainParams params_;
  Rng rng_;
  std::size_t position_ = 0;
  EnvState state_;
};

inline EnvState nchain_reset(const NChainParams& params, std::uint64_t seed) {
  NChain env(params, seed);
  return env.state();
}

}  // namespace claclab::envs
