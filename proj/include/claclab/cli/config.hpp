#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "claclab/agents/config.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/envs/any_env.hpp"
#include "claclab/harness/experiment.hpp"
#include "claclab/harness/generalization.hpp"

namespace claclab::cli {

using nlohmann::json;

struct EvalSection {
  std::size_t resample_count = 50;
  std::size_t episodes = 1;
  std::map<harness::Regime, envs::ResampleSpec> regimes;  // overrides of the regime defaults
};

struct SweepSection {
  agents::Algorithm algorithm = agents::Algorithm::CLAC;
  std::string grid = "0:1:0.1";
  std::size_t refine_rounds = 1;
};

/// Everything a subcommand needs, after defaults, file and overrides.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string out = "runs/default";
  std::size_t workers = 1;
  harness::ExperimentSpec experiment;
  EvalSection eval;
  SweepSection sweep;
  std::uint64_t plot_bucket = 1000;
};

inline envs::ResampleSpec default_training_resample(const envs::EnvConfig& env) {
  if (env.kind == envs::EnvKind::NChain) {
    return {{"hidden_values", envs::ParamRegime::beta(env.nchain.beta_a, env.nchain.beta_b)}};
  }
  return harness::default_regime_spec(env, harness::Regime::Random);
}

inline json default_config_json() {
  const RunConfig d;
  return {
      {"seed", d.seed},
      {"out", d.out},
      {"workers", d.workers},
      {"env", {{"name", "nchain"}, {"nchain", envs::to_json(envs::NChainParams{})}, {"pendulum", envs::to_json(envs::PendulumParams{})}}},
      {"resample", nullptr},
      {"agent", agents::to_json(agents::AgentConfig{})},
      {"experiment",
       {{"algorithms", {"clac", "sac", "mirl"}},
        {"coefficients", json::object()},
        {"total_steps", 50'000},
        {"resample_interval", 10'000},
        {"n_agents", 8},
        {"eval_episodes", 1},
        {"record_mi_trace", false}}},
      {"eval", {{"resample_count", d.eval.resample_count}, {"episodes", d.eval.episodes}, {"regimes", json::object()}}},
      {"sweep", {{"algorithm", "clac"}, {"grid", d.sweep.grid}, {"refine_rounds", d.sweep.refine_rounds}}},
      {"plot", {{"bucket", d.plot_bucket}}},
  };
}

namespace detail {

// Objects whose keys are free-form; their contents are checked when parsed.
inline bool open_map(const std::string& path) {
  return path == "resample" || path == "experiment.coefficients" || path == "eval.regimes";
}

inline std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

inline const char* type_word(const json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "a boolean";
  if (v.is_number_unsigned()) return "a non-negative integer";
  if (v.is_number()) return "a number";
  if (v.is_string()) return "a string";
  if (v.is_array()) return "an array";
  return "an object";
}

inline bool compatible(const json& def, const json& v) {
  if (def.is_null()) return true;  // nullable field; parsed later
  if (def.is_number_unsigned()) return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (def.is_number()) return v.is_number();
  return def.type() == v.type();
}

/// Copies `user` over `defaults`, rejecting keys the defaults do not have and
/// values whose JSON type differs from the default's.
inline json merge(const json& defaults, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path, "expected an object");
  json out = defaults;
  for (const auto& [key, value] : user.items()) {
    const std::string p = join(path, key);
    if (!defaults.contains(key)) throw ConfigError(p, "unknown key");
    const json& def = defaults.at(key);
    if (def.is_object() && !open_map(p)) {
      out[key] = merge(def, value, p);
    } else if (def.is_null() && value.is_object() && !open_map(p)) {
      out[key] = value;
    } else {
      if (!compatible(def, value)) throw ConfigError(p, std::string("expected ") + type_word(def) + ", got " + type_word(value));
      out[key] = value;
    }
  }
  return out;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) line += text[i] == '\n';
  return line;
}

template <typename F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace detail

/// Parses config text; syntax errors report the line.
inline json parse_config_text(const std::string& text, const std::string& source = "config") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", source + ":" + std::to_string(detail::line_of(text, e.byte)) + ": syntax error: " + e.what());
  }
}

/// Applies "dotted.path=value" to a user document. The value is read as JSON
/// when it parses as JSON and as a plain string otherwise.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  const json defaults = default_config_json();
  const json* def = &defaults;
  json* node = &doc;
  std::string walked;
  std::istringstream parts(path);
  std::vector<std::string> keys;
  for (std::string k; std::getline(parts, k, '.');) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string& k = keys[i];
    const bool open = detail::open_map(walked);
    walked = detail::join(walked, k);
    if (def && !open && (!def->is_object() || !def->contains(k))) throw ConfigError(walked, "unknown key");
    def = (def && !open && def->is_object()) ? &def->at(k) : nullptr;
    if (!node->is_object()) *node = json::object();
    if (i + 1 == keys.size()) {
      (*node)[k] = value;
    } else {
      node = &(*node)[k];
    }
  }
}

inline envs::EnvConfig env_from_json(const json& j) {
  envs::EnvConfig e;
  e.kind = detail::with_path("env.name", [&] { return envs::env_kind_from_string(j.at("name").get<std::string>()); });
  e.nchain = detail::with_path("env.nchain", [&] { return envs::nchain_params_from_json(j.at("nchain")); });
  e.pendulum = detail::with_path("env.pendulum", [&] { return envs::pendulum_params_from_json(j.at("pendulum")); });
  if (e.kind == envs::EnvKind::NChain && !e.nchain.hidden_values.empty()) detail::with_path("env.nchain", [&] { e.nchain.validate(); });
  detail::with_path("env.pendulum", [&] { e.pendulum.validate(); });
  return e;
}

/// Typed view of a fully merged document.
inline RunConfig config_from_resolved(const json& j) {
  RunConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.workers = j.at("workers").get<std::size_t>();
  if (c.workers == 0) throw ConfigError("workers", "must be >= 1");

  auto& x = c.experiment;
  x.env = env_from_json(j.at("env"));
  x.resample = j.at("resample").is_null()
                   ? default_training_resample(x.env)
                   : detail::with_path("resample", [&] { return envs::spec_from_json(j.at("resample"), "resample"); });
  x.agent = detail::with_path("agent", [&] { return agents::agent_config_from_json(j.at("agent")); });
  const json& e = j.at("experiment");
  x.algorithms.clear();
  for (const auto& a : e.at("algorithms")) {
    x.algorithms.push_back(detail::with_path("experiment.algorithms", [&] { return agents::algorithm_from_string(a.get<std::string>()); }));
  }
  for (const auto& [name, v] : e.at("coefficients").items()) {
    const auto alg = detail::with_path("experiment.coefficients." + name, [&] { return agents::algorithm_from_string(name); });
    x.coefficients[alg] = detail::with_path("experiment.coefficients." + name, [&] { return v.get<double>(); });
  }
  x.total_steps = e.at("total_steps").get<std::uint64_t>();
  x.resample_interval = e.at("resample_interval").get<std::uint64_t>();
  x.n_agents = e.at("n_agents").get<std::size_t>();
  x.eval_episodes = e.at("eval_episodes").get<std::size_t>();
  x.record_mi_trace = e.at("record_mi_trace").get<bool>();
  x.base_seed = c.seed;
  detail::with_path("experiment", [&] { x.validate(); });

  const json& ev = j.at("eval");
  c.eval.resample_count = ev.at("resample_count").get<std::size_t>();
  c.eval.episodes = ev.at("episodes").get<std::size_t>();
  if (c.eval.resample_count == 0 || c.eval.episodes == 0) throw ConfigError("eval", "counts must be >= 1");
  for (const auto& [name, spec] : ev.at("regimes").items()) {
    const std::string p = "eval.regimes." + name;
    const auto regime = detail::with_path(p, [&] { return harness::regime_from_string(name); });
    c.eval.regimes[regime] = detail::with_path(p, [&] { return envs::spec_from_json(spec, p); });
  }

  const json& s = j.at("sweep");
  c.sweep.algorithm = detail::with_path("sweep.algorithm", [&] { return agents::algorithm_from_string(s.at("algorithm").get<std::string>()); });
  c.sweep.grid = s.at("grid").get<std::string>();
  c.sweep.refine_rounds = s.at("refine_rounds").get<std::size_t>();
  c.plot_bucket = j.at("plot").at("bucket").get<std::uint64_t>();
  if (c.plot_bucket == 0) throw ConfigError("plot.bucket", "must be >= 1");
  return c;
}

/// Fully resolved document: every default filled in, the training resample
/// spec made explicit. Loading it back reproduces the same RunConfig.
inline json resolved_json(const RunConfig& c) {
  json j = default_config_json();
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["workers"] = c.workers;
  const auto& x = c.experiment;
  j["env"] = {{"name", envs::to_string(x.env.kind)}, {"nchain", envs::to_json(x.env.nchain)}, {"pendulum", envs::to_json(x.env.pendulum)}};
  j["resample"] = envs::to_json(x.resample);
  j["agent"] = agents::to_json(x.agent);
  json algs = json::array();
  for (auto a : x.algorithms) algs.push_back(agents::to_string(a));
  json coefs = json::object();
  for (const auto& [a, v] : x.coefficients) coefs[agents::to_string(a)] = v;
  j["experiment"] = {{"algorithms", algs},         {"coefficients", coefs},         {"total_steps", x.total_steps},
                     {"resample_interval", x.resample_interval}, {"n_agents", x.n_agents}, {"eval_episodes", x.eval_episodes},
                     {"record_mi_trace", x.record_mi_trace}};
  json regimes = json::object();
  for (const auto& [r, spec] : c.eval.regimes) regimes[harness::to_string(r)] = envs::to_json(spec);
  j["eval"] = {{"resample_count", c.eval.resample_count}, {"episodes", c.eval.episodes}, {"regimes", regimes}};
  j["sweep"] = {{"algorithm", agents::to_string(c.sweep.algorithm)}, {"grid", c.sweep.grid}, {"refine_rounds", c.sweep.refine_rounds}};
  j["plot"] = {{"bucket", c.plot_bucket}};
  return j;
}

/// Defaults, then the user document, then overrides, then validation.
inline RunConfig resolve_config(const json& user, const std::vector<std::string>& overrides = {}) {
  json doc = user.is_null() ? json::object() : user;
  for (const auto& o : overrides) apply_override(doc, o);
  const json merged = detail::merge(default_config_json(), doc, "");
  return detail::with_path("", [&] { return config_from_resolved(merged); });
}

inline RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides = {}) {
  json user = json::object();
  if (path) {
    std::ifstream is(*path, std::ios::binary);
    if (!is) throw ConfigError("", "cannot read config file " + path->string());
    std::stringstream ss;
    ss << is.rdbuf();
    user = parse_config_text(ss.str(), path->string());
  }
  return resolve_config(user, overrides);
}

inline void write_resolved(const RunConfig& c, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << resolved_json(c).dump(2) << '\n';
}

}  // namespace claclab::cli
