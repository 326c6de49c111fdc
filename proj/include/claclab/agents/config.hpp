#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claclab/core/errors.hpp"

namespace claclab::agents {

enum class Algorithm { CLAC, SAC, MIRL };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::CLAC: return "clac";
    case Algorithm::SAC: return "sac";
    case Algorithm::MIRL: return "mirl";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "clac") return Algorithm::CLAC;
  if (s == "sac") return Algorithm::SAC;
  if (s == "mirl") return Algorithm::MIRL;
  throw InvalidArgument("unknown algorithm '" + s + "' (expected clac, sac or mirl)");
}

// What the MIRL agent does when the epsilon coin says "exploit".
enum class MirlExploit {
  Sample,  // draw from the policy, as CLAC does
  Greedy,  // take tanh(mean)
};

struct AgentConfig {
  Algorithm algorithm = Algorithm::CLAC;
  // beta for CLAC, initial beta for MIRL, entropy weight alpha for SAC.
  double coefficient = 0.5;
  double gamma = 0.99;
  double tau = 0.005;
  double lr_value = 3e-4;
  double lr_q = 3e-4;
  double lr_policy = 3e-4;
  std::size_t batch_size = 256;
  std::size_t gradient_steps = 1;
  std::size_t target_update_interval = 1;
  std::size_t learning_starts = 0;
  std::size_t replay_capacity = 1'000'000;
  std::vector<std::size_t> hidden = {256, 256};
  double marginal_lr = 1e-3;

  // Automatic beta: when set, beta tracks this capacity (nats) instead of
  // staying fixed. CLAC only.
  std::optional<double> target_capacity;
  double beta_lr = 3e-4;

  double mirl_epsilon = 0.1;
  std::size_t mirl_horizon = 0;  // steps until beta and epsilon reach zero
  MirlExploit mirl_exploit = MirlExploit::Sample;

  void validate() const {
    if (!(coefficient >= 0.0) || !std::isfinite(coefficient)) throw InvalidArgument("agent: coefficient must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("agent: gamma must lie in [0, 1)");
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("agent: tau must lie in [0, 1]");
    if (!(lr_value > 0.0 && lr_q > 0.0 && lr_policy > 0.0)) throw InvalidArgument("agent: learning rates must be > 0");
    if (batch_size == 0) throw InvalidArgument("agent: batch_size must be positive");
    if (target_update_interval == 0) throw InvalidArgument("agent: target_update_interval must be positive");
    if (replay_capacity == 0) throw InvalidArgument("agent: replay_capacity must be positive");
    if (hidden.empty()) throw InvalidArgument("agent: at least one hidden layer is required");
    if (!(marginal_lr > 0.0 && marginal_lr <= 1.0)) throw InvalidArgument("agent: marginal_lr must lie in (0, 1]");
    if (target_capacity && !std::isfinite(*target_capacity)) throw InvalidArgument("agent: target_capacity must be finite");
    if (target_capacity && algorithm != Algorithm::CLAC) throw InvalidArgument("agent: auto beta applies to clac only");
    if (!(beta_lr > 0.0)) throw InvalidArgument("agent: beta_lr must be > 0");
    if (!(mirl_epsilon >= 0.0 && mirl_epsilon <= 1.0)) throw InvalidArgument("agent: mirl epsilon must lie in [0, 1]");
  }
};

inline nlohmann::json to_json(const AgentConfig& c) {
  nlohmann::json j = {
      {"algorithm", to_string(c.algorithm)},
      {"beta", c.coefficient},
      {"gamma", c.gamma},
      {"tau", c.tau},
      {"lr_value", c.lr_value},
      {"lr_q", c.lr_q},
      {"lr_policy", c.lr_policy},
      {"batch_size", c.batch_size},
      {"gradient_steps", c.gradient_steps},
      {"target_update_interval", c.target_update_interval},
      {"learning_starts", c.learning_starts},
      {"replay_capacity", c.replay_capacity},
      {"hidden", c.hidden},
      {"marginal_lr", c.marginal_lr},
      {"auto_beta", c.target_capacity ? nlohmann::json(*c.target_capacity) : nlohmann::json(nullptr)},
      {"beta_lr", c.beta_lr},
      {"mirl_epsilon", c.mirl_epsilon},
      {"mirl_horizon", c.mirl_horizon},
      {"mirl_exploit", c.mirl_exploit == MirlExploit::Sample ? "sample" : "greedy"},
  };
  return j;
}

inline AgentConfig agent_config_from_json(const nlohmann::json& j) {
  AgentConfig c;
  c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  c.coefficient = j.at("beta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.tau = j.at("tau").get<double>();
  c.lr_value = j.at("lr_value").get<double>();
  c.lr_q = j.at("lr_q").get<double>();
  c.lr_policy = j.at("lr_policy").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.gradient_steps = j.at("gradient_steps").get<std::size_t>();
  c.target_update_interval = j.at("target_update_interval").get<std::size_t>();
  c.learning_starts = j.at("learning_starts").get<std::size_t>();
  c.replay_capacity = j.at("replay_capacity").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.marginal_lr = j.at("marginal_lr").get<double>();
  if (!j.at("auto_beta").is_null()) c.target_capacity = j.at("auto_beta").get<double>();
  c.beta_lr = j.at("beta_lr").get<double>();
  c.mirl_epsilon = j.at("mirl_epsilon").get<double>();
  c.mirl_horizon = j.at("mirl_horizon").get<std::size_t>();
  c.mirl_exploit = j.at("mirl_exploit").get<std::string>() == "greedy" ? MirlExploit::Greedy : MirlExploit::Sample;
  c.validate();
  return c;
}

/// Linear decay of MIRL's beta and epsilon to zero over `horizon` env steps.
struct MirlSchedule {
  double beta0 = 0.5;
  double epsilon0 = 0.1;
  std::size_t horizon = 0;
  std::size_t step = 0;

  double fraction_left() const {
    if (horizon == 0) return 1.0;
    return std::max(0.0, 1.0 - static_cast<double>(step) / static_cast<double>(horizon));
  }
  double beta() const { return beta0 * fraction_left(); }
  double epsilon() const { return epsilon0 * fraction_left(); }
  void advance() { ++step; }
};

/// Dual-ascent controller for beta, parameterized in log space.
///
/// J(beta) = beta (C - I); the step on log beta moves against dJ/dbeta, so beta
/// rises while measured MI exceeds the target capacity C and falls otherwise.
struct BetaController {
  static constexpr double kMin = 1e-6;
  static constexpr double kMax = 1e3;

  double log_beta = std::log(0.5);
  double target_capacity = 0.0;
  double learning_rate = 3e-4;

  BetaController() = default;
  BetaController(double beta, double capacity, double lr)
      : log_beta(std::log(std::clamp(beta, kMin, kMax))), target_capacity(capacity), learning_rate(lr) {}

  double beta() const { return std::exp(log_beta); }

  void update(double mean_mi) {
    log_beta -= learning_rate * (target_capacity - mean_mi);
    log_beta = std::clamp(log_beta, std::log(kMin), std::log(kMax));
  }
};

inline void update_beta(BetaController& ctrl, double mean_mi) { ctrl.update(mean_mi); }

}  // namespace claclab::agents
