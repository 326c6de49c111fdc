#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "claclab/agents/agent.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/ndiff/checkpoint.hpp"

namespace claclab::agents {

// A checkpoint directory holds params.bin (every network tensor and Adam
// moment) and agent.json (config, marginal, beta, schedule, RNG streams,
// counters, plus whatever `extra` the caller attaches).
inline constexpr const char* kParamsFile = "params.bin";
inline constexpr const char* kAgentFile = "agent.json";

namespace detail {

struct NetSlot {
  const char* name;
  ndiff::Mlp NetworkSet::*net;
  ndiff::AdamState NetworkSet::*opt;  // null for the target network
};

inline const std::vector<NetSlot>& net_slots() {
  static const std::vector<NetSlot> slots = {
      {"value", &NetworkSet::value, &NetworkSet::value_opt},
      {"value_target", &NetworkSet::value_target, nullptr},
      {"q1", &NetworkSet::q1, &NetworkSet::q1_opt},
      {"q2", &NetworkSet::q2, &NetworkSet::q2_opt},
      {"policy", &NetworkSet::policy, &NetworkSet::policy_opt},
  };
  return slots;
}

}  // namespace detail

inline std::vector<ndiff::NamedTensor> agent_tensors(const Agent& agent) {
  std::vector<ndiff::NamedTensor> out;
  const NetworkSet& n = agent.nets();
  for (const auto& slot : detail::net_slots()) {
    const auto& params = (n.*slot.net).params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      out.push_back({std::string(slot.name) + "/" + ndiff::Mlp::param_name(i), params[i]});
    }
    if (slot.opt == nullptr) continue;
    const auto& opt = n.*slot.opt;
    for (std::size_t i = 0; i < params.size(); ++i) {
      out.push_back({std::string(slot.name) + "/adam_m/" + ndiff::Mlp::param_name(i), opt.m[i]});
      out.push_back({std::string(slot.name) + "/adam_v/" + ndiff::Mlp::param_name(i), opt.v[i]});
    }
  }
  return out;
}

inline nlohmann::json agent_state_json(const Agent& agent) {
  const auto& n = agent.nets();
  nlohmann::json adam;
  for (const auto& slot : detail::net_slots()) {
    if (slot.opt == nullptr) continue;
    const auto& opt = n.*slot.opt;
    adam[slot.name] = {{"step", opt.step}, {"learning_rate", opt.learning_rate}, {"beta1", opt.beta1},
                       {"beta2", opt.beta2}, {"epsilon", opt.epsilon}};
  }
  const auto& m = agent.marginal();
  const auto& b = agent.beta_controller();
  const auto& s = agent.mirl_schedule();
  return {
      {"format", 1},
      {"config", to_json(agent.config())},
      {"observation_dim", n.obs_dim},
      {"action_dim", n.act_dim},
      {"marginal", {{"mean", m.mean}, {"variance", m.variance}, {"learning_rate", m.learning_rate}, {"initialized", m.initialized}}},
      {"beta_controller", {{"log_beta", b.log_beta}, {"target_capacity", b.target_capacity}, {"learning_rate", b.learning_rate}}},
      {"mirl_schedule", {{"beta0", s.beta0}, {"epsilon0", s.epsilon0}, {"horizon", s.horizon}, {"step", s.step}}},
      {"rng", agent.rng().state()},
      {"explore_rng", agent.explore_rng().state()},
      {"env_steps", agent.env_steps()},
      {"gradient_steps", agent.gradient_steps()},
      {"adam", adam},
  };
}

inline void save_agent(const Agent& agent, const std::filesystem::path& dir, const nlohmann::json& extra = nlohmann::json::object()) {
  std::filesystem::create_directories(dir);
  ndiff::save_container((dir / kParamsFile).string(), agent_tensors(agent));
  nlohmann::json j = agent_state_json(agent);
  j["extra"] = extra;
  std::ofstream os(dir / kAgentFile);
  if (!os) throw std::runtime_error("save_agent: cannot write " + (dir / kAgentFile).string());
  os << j.dump(2) << '\n';
}

struct LoadedAgent {
  Agent agent;
  nlohmann::json extra;
};

inline LoadedAgent load_agent(const std::filesystem::path& dir) {
  std::ifstream is(dir / kAgentFile);
  if (!is) throw std::runtime_error("load_agent: cannot read " + (dir / kAgentFile).string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("load_agent: malformed agent.json: ") + e.what());
  }

  LoadedAgent out;
  const AgentConfig cfg = agent_config_from_json(j.at("config"));
  out.agent = Agent(cfg, j.at("observation_dim").get<std::size_t>(), j.at("action_dim").get<std::size_t>(), 0);
  Agent& a = out.agent;

  std::map<std::string, ndiff::Tensor> by_name;
  for (auto& t : ndiff::load_container((dir / kParamsFile).string())) by_name.emplace(t.name, std::move(t.tensor));
  auto take = [&](const std::string& name, ndiff::Tensor& dst) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::runtime_error("load_agent: missing tensor " + name);
    if (!it->second.same_shape(dst)) throw std::runtime_error("load_agent: tensor " + name + " has the wrong shape");
    dst = std::move(it->second);
    by_name.erase(it);
  };
  NetworkSet& n = a.nets();
  for (const auto& slot : detail::net_slots()) {
    auto& params = (n.*slot.net).params();
    for (std::size_t i = 0; i < params.size(); ++i) take(std::string(slot.name) + "/" + ndiff::Mlp::param_name(i), params[i]);
    if (slot.opt == nullptr) continue;
    auto& opt = n.*slot.opt;
    for (std::size_t i = 0; i < params.size(); ++i) {
      take(std::string(slot.name) + "/adam_m/" + ndiff::Mlp::param_name(i), opt.m[i]);
      take(std::string(slot.name) + "/adam_v/" + ndiff::Mlp::param_name(i), opt.v[i]);
    }
    const auto& ja = j.at("adam").at(slot.name);
    opt.step = ja.at("step").get<std::uint64_t>();
    opt.learning_rate = ja.at("learning_rate").get<double>();
    opt.beta1 = ja.at("beta1").get<double>();
    opt.beta2 = ja.at("beta2").get<double>();
    opt.epsilon = ja.at("epsilon").get<double>();
  }
  if (!by_name.empty()) throw std::runtime_error("load_agent: unexpected tensor " + by_name.begin()->first);

  const auto& jm = j.at("marginal");
  auto& m = a.marginal();
  m.mean = jm.at("mean").get<std::vector<double>>();
  m.variance = jm.at("variance").get<std::vector<double>>();
  m.learning_rate = jm.at("learning_rate").get<double>();
  m.initialized = jm.at("initialized").get<bool>();
  const auto& jb = j.at("beta_controller");
  a.beta_controller().log_beta = jb.at("log_beta").get<double>();
  a.beta_controller().target_capacity = jb.at("target_capacity").get<double>();
  a.beta_controller().learning_rate = jb.at("learning_rate").get<double>();
  const auto& js = j.at("mirl_schedule");
  a.mirl_schedule().beta0 = js.at("beta0").get<double>();
  a.mirl_schedule().epsilon0 = js.at("epsilon0").get<double>();
  a.mirl_schedule().horizon = js.at("horizon").get<std::size_t>();
  a.mirl_schedule().step = js.at("step").get<std::size_t>();
  a.rng().set_state(j.at("rng").get<std::string>());
  a.explore_rng().set_state(j.at("explore_rng").get<std::string>());
  a.set_counters(j.at("env_steps").get<std::uint64_t>(), j.at("gradient_steps").get<std::uint64_t>());
  out.extra = j.value("extra", nlohmann::json::object());
  return out;
}

}  // namespace claclab::agents
