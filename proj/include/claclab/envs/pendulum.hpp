#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/envs/env.hpp"

namespace claclab::envs {

struct PendulumParams {
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.8;
  double max_torque = 2.0;
  double dt = 0.05;
  double max_speed = 8.0;
  std::size_t max_episode_steps = 200;

  void validate() const {
    if (!(mass > 0.0 && length > 0.0 && max_torque > 0.0 && dt > 0.0 && max_speed > 0.0)) {
      throw InvalidArgument("pendulum: mass, length, max_torque, dt and max_speed must be positive");
    }
    // Zero gravity is allowed: it is the torque-free conservation check.
    if (!(gravity >= 0.0)) throw InvalidArgument("pendulum: gravity must be non-negative");
    if (max_episode_steps == 0) throw InvalidArgument("pendulum: max_episode_steps must be positive");
  }

  friend bool operator==(const PendulumParams&, const PendulumParams&) = default;
};

inline double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double x = std::fmod(theta + std::numbers::pi, two_pi);
  if (x < 0.0) x += two_pi;
  return x - std::numbers::pi;
}

/// Torque-driven rigid pendulum, theta = 0 upright. Semi-implicit Euler.
class Pendulum {
 public:
  explicit Pendulum(PendulumParams params = {}, std::uint64_t seed = 0) : params_(params), rng_(seed) {
    params_.validate();
    reset(seed);
  }

  static constexpr const char* name() { return "pendulum"; }
  std::size_t observation_dim() const noexcept { return 3; }
  std::size_t action_dim() const noexcept { return 1; }
  const PendulumParams& params() const noexcept { return params_; }
  void set_params(PendulumParams params) {
    params.validate();
    params_ = params;
  }

  double theta() const noexcept { return theta_; }
  double theta_dot() const noexcept { return theta_dot_; }
  const EnvState& state() const noexcept { return state_; }

  EnvState reset(std::uint64_t seed) {
    rng_ = Rng(seed);
    return reset();
  }

  // Initial angle uniform on [-pi, pi], angular velocity uniform on [-1, 1].
  EnvState reset() {
    const double theta = rng_.uniform(-std::numbers::pi, std::numbers::pi);
    const double theta_dot = rng_.uniform(-1.0, 1.0);
    return set_physical_state(theta, theta_dot);
  }

  EnvState set_physical_state(double theta, double theta_dot) {
    theta_ = theta;
    theta_dot_ = theta_dot;
    state_ = EnvState{observe(), 0, false, false};
    return state_;
  }

  StepResult step(std::span<const double> action) {
    if (state_.done) throw ContractViolation("pendulum: step after episode end");
    if (action.size() != 1) throw InvalidArgument("pendulum: action must be 1-dimensional");
    const auto& p = params_;
    const double u = std::clamp(action[0], -1.0, 1.0) * p.max_torque;
    const double th = wrap_angle(theta_);
    const double reward = -(th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u);

    const double accel = 3.0 * p.gravity / (2.0 * p.length) * std::sin(theta_) + 3.0 / (p.mass * p.length * p.length) * u;
    theta_dot_ = std::clamp(theta_dot_ + accel * p.dt, -p.max_speed, p.max_speed);
    theta_ = theta_ + theta_dot_ * p.dt;

    state_.observation = observe();
    state_.step_index += 1;
    if (state_.step_index >= p.max_episode_steps) state_.done = true;
    return {state_, reward};
  }

 private:
  std::vector<double> observe() const { return {std::cos(theta_), std::sin(theta_), theta_dot_}; }

  PendulumParams params_;
  Rng rng_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  EnvState state_;
};

}  // namespace claclab::envs
