#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "claclab/core/errors.hpp"
#include "claclab/envs/env.hpp"
#include "claclab/envs/nchain.hpp"
#include "claclab/envs/pendulum.hpp"
#include "claclab/envs/resample.hpp"

namespace claclab::envs {

enum class EnvKind { NChain, Pendulum };

inline std::string to_string(EnvKind k) { return k == EnvKind::NChain ? "nchain" : "pendulum"; }

inline EnvKind env_kind_from_string(const std::string& s) {
  if (s == "nchain") return EnvKind::NChain;
  if (s == "pendulum") return EnvKind::Pendulum;
  throw InvalidArgument("unknown environment '" + s + "' (expected nchain or pendulum)");
}

/// Environment identity plus its parameters; params for the unused kind are ignored.
struct EnvConfig {
  EnvKind kind = EnvKind::NChain;
  NChainParams nchain;
  PendulumParams pendulum;

  nlohmann::json params_json() const { return kind == EnvKind::NChain ? to_json(nchain) : to_json(pendulum); }

  nlohmann::json to_json_doc() const { return {{"name", to_string(kind)}, {"params", params_json()}}; }

  static EnvConfig from_json_doc(const nlohmann::json& j) {
    EnvConfig c;
    c.kind = env_kind_from_string(j.at("name").get<std::string>());
    if (c.kind == EnvKind::NChain) {
      c.nchain = nchain_params_from_json(j.at("params"));
    } else {
      c.pendulum = pendulum_params_from_json(j.at("params"));
    }
    return c;
  }

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

inline EnvConfig resample(const EnvConfig& cfg, const ResampleSpec& spec, std::uint64_t seed) {
  EnvConfig out = cfg;
  if (cfg.kind == EnvKind::NChain) {
    out.nchain = resample(cfg.nchain, spec, seed);
  } else {
    out.pendulum = resample(cfg.pendulum, spec, seed);
  }
  return out;
}

/// Value-semantic holder for either environment with the shared interface.
class AnyEnv {
 public:
  AnyEnv(const EnvConfig& cfg, std::uint64_t seed) : env_(make(cfg, seed)) {}

  EnvKind kind() const noexcept { return std::holds_alternative<NChain>(env_) ? EnvKind::NChain : EnvKind::Pendulum; }
  std::size_t observation_dim() const {
    return std::visit([](const auto& e) { return e.observation_dim(); }, env_);
  }
  std::size_t action_dim() const {
    return std::visit([](const auto& e) { return e.action_dim(); }, env_);
  }
  const EnvState& state() const {
    return std::visit([](const auto& e) -> const EnvState& { return e.state(); }, env_);
  }
  EnvState reset(std::uint64_t seed) {
    return std::visit([seed](auto& e) { return e.reset(seed); }, env_);
  }
  EnvState reset() {
    return std::visit([](auto& e) { return e.reset(); }, env_);
  }
  StepResult step(std::span<const double> action) {
    return std::visit([action](auto& e) { return e.step(action); }, env_);
  }

  void set_params(const EnvConfig& cfg) {
    if (cfg.kind != kind()) throw InvalidArgument("AnyEnv: environment kind mismatch");
    if (auto* n = std::get_if<NChain>(&env_)) {
      n->set_params(cfg.nchain);
    } else {
      std::get<Pendulum>(env_).set_params(cfg.pendulum);
    }
  }

  EnvConfig config() const {
    EnvConfig c;
    c.kind = kind();
    if (auto* n = std::get_if<NChain>(&env_)) {
      c.nchain = n->params();
    } else {
      c.pendulum = std::get<Pendulum>(env_).params();
    }
    return c;
  }

 private:
  static std::variant<NChain, Pendulum> make(const EnvConfig& cfg, std::uint64_t seed) {
    if (cfg.kind == EnvKind::NChain) return NChain(cfg.nchain, seed);
    return Pendulum(cfg.pendulum, seed);
  }

  std::variant<NChain, Pendulum> env_;
};

static_assert(Environment<NChain>);
static_assert(Environment<Pendulum>);
static_assert(Environment<AnyEnv>);

}  // namespace claclab::envs
