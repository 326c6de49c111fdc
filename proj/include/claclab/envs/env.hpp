#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace claclab::envs {

struct EnvState {
  std::vector<double> observation;
  std::size_t step_index = 0;
  bool done = false;
  // True only when the episode ended in an absorbing state; a time-limit cut
  // sets done without terminal so value bootstrapping continues through it.
  bool terminal = false;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepResult {
  EnvState state;
  double reward = 0.0;
};

template <typename E>
concept Environment = requires(E env, const E cenv, std::span<const double> action, std::uint64_t seed) {
  { cenv.observation_dim() } -> std::convertible_to<std::size_t>;
  { cenv.action_dim() } -> std::convertible_to<std::size_t>;
  { env.reset(seed) } -> std::same_as<EnvState>;
  { env.reset() } -> std::same_as<EnvState>;
  { env.step(action) } -> std::same_as<StepResult>;
  { cenv.state() } -> std::same_as<const EnvState&>;
};

}  // namespace claclab::envs
