#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/envs/nchain.hpp"
#include "claclab/envs/pendulum.hpp"

namespace claclab::envs {

/// How one environment parameter is redrawn.
///
/// With `relative` set, the bounds are fractions of the parameter's current
/// (nominal) value, so 0.95..1.05 means 95-105% of nominal.
struct ParamRegime {
  enum class Kind { Fixed, Uniform, Disjoint, Beta };

  Kind kind = Kind::Fixed;
  double lo = 0.0, hi = 0.0;    // uniform, and the first disjoint band
  double lo2 = 0.0, hi2 = 0.0;  // second disjoint band
  double a = 1.0, b = 1.0;      // beta shapes
  bool relative = false;

  static ParamRegime fixed() { return {}; }
  static ParamRegime uniform(double lo, double hi, bool relative = false) {
    return {Kind::Uniform, lo, hi, 0.0, 0.0, 1.0, 1.0, relative};
  }
  static ParamRegime disjoint(double lo1, double hi1, double lo2, double hi2, bool relative = false) {
    return {Kind::Disjoint, lo1, hi1, lo2, hi2, 1.0, 1.0, relative};
  }
  static ParamRegime beta(double a, double b) { return {Kind::Beta, 0.0, 0.0, 0.0, 0.0, a, b, false}; }

  void validate(const std::string& param) const {
    switch (kind) {
      case Kind::Fixed: return;
      case Kind::Uniform:
        if (!(lo <= hi)) throw InvalidArgument("resample " + param + ": uniform bounds out of order");
        return;
      case Kind::Disjoint:
        if (!(lo <= hi && lo2 <= hi2)) throw InvalidArgument("resample " + param + ": disjoint bounds out of order");
        if (!(hi <= lo2)) throw InvalidArgument("resample " + param + ": disjoint bands overlap");
        return;
      case Kind::Beta:
        if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("resample " + param + ": beta shapes must be positive");
        return;
    }
  }

  double draw(double nominal, Rng& rng) const {
    const double scale = relative ? nominal : 1.0;
    switch (kind) {
      case Kind::Fixed: return nominal;
      case Kind::Uniform: return scale * rng.uniform(lo, hi);
      case Kind::Disjoint: {
        const double w1 = hi - lo;
        const double w2 = hi2 - lo2;
        const double pick = rng.uniform(0.0, w1 + w2);
        return pick < w1 ? scale * (lo + pick) : scale * (lo2 + (pick - w1));
      }
      case Kind::Beta: return rng.beta(a, b);
    }
    return nominal;
  }

  friend bool operator==(const ParamRegime&, const ParamRegime&) = default;
};

/// Per-parameter regimes keyed by parameter name. Parameters not listed keep
/// their value.
using ResampleSpec = std::map<std::string, ParamRegime>;

inline void validate_spec(const ResampleSpec& spec, const std::vector<std::string>& owned) {
  for (const auto& [name, regime] : spec) {
    if (std::find(owned.begin(), owned.end(), name) == owned.end()) {
      throw InvalidArgument("resample: environment has no parameter '" + name + "'");
    }
    regime.validate(name);
  }
}

inline std::vector<std::string> resamplable_params(const NChainParams&) { return {"hidden_values"}; }
inline std::vector<std::string> resamplable_params(const PendulumParams&) {
  return {"mass", "length", "gravity", "max_torque"};
}

/// Redraws every parameter named in `spec`; the vector `hidden_values` is
/// redrawn elementwise. Deterministic per seed.
inline NChainParams resample(const NChainParams& params, const ResampleSpec& spec, std::uint64_t seed) {
  validate_spec(spec, resamplable_params(params));
  Rng rng(seed);
  NChainParams out = params;
  if (auto it = spec.find("hidden_values"); it != spec.end()) {
    if (out.hidden_values.size() != out.n_states - 1) out.hidden_values.assign(out.n_states - 1, 0.5);
    for (double& h : out.hidden_values) h = it->second.draw(h, rng);
  }
  out.validate();
  return out;
}

inline PendulumParams resample(const PendulumParams& params, const ResampleSpec& spec, std::uint64_t seed) {
  validate_spec(spec, resamplable_params(params));
  Rng rng(seed);
  PendulumParams out = params;
  for (const auto& [name, regime] : spec) {  // std::map: sorted, stable draw order
    double* field = name == "mass"      ? &out.mass
                    : name == "length"  ? &out.length
                    : name == "gravity" ? &out.gravity
                                        : &out.max_torque;
    *field = regime.draw(*field, rng);
  }
  out.validate();
  return out;
}

// JSON forms used by configs, checkpoints and the parameter audit dump.

inline nlohmann::json to_json(const NChainParams& p) {
  return {{"n_states", p.n_states},   {"hidden_values", p.hidden_values},         {"beta_a", p.beta_a},
          {"beta_b", p.beta_b},       {"max_episode_steps", p.max_episode_steps}, {"sharpness", p.sharpness}};
}

inline nlohmann::json to_json(const PendulumParams& p) {
  return {{"mass", p.mass},       {"length", p.length}, {"gravity", p.gravity},
          {"max_torque", p.max_torque}, {"dt", p.dt}, {"max_speed", p.max_speed},
          {"max_episode_steps", p.max_episode_steps}};
}

inline NChainParams nchain_params_from_json(const nlohmann::json& j) {
  NChainParams p;
  p.n_states = j.at("n_states").get<std::size_t>();
  p.hidden_values = j.at("hidden_values").get<std::vector<double>>();
  p.beta_a = j.at("beta_a").get<double>();
  p.beta_b = j.at("beta_b").get<double>();
  p.max_episode_steps = j.at("max_episode_steps").get<std::size_t>();
  p.sharpness = j.at("sharpness").get<double>();
  return p;
}

inline PendulumParams pendulum_params_from_json(const nlohmann::json& j) {
  PendulumParams p;
  p.mass = j.at("mass").get<double>();
  p.length = j.at("length").get<double>();
  p.gravity = j.at("gravity").get<double>();
  p.max_torque = j.at("max_torque").get<double>();
  p.dt = j.at("dt").get<double>();
  p.max_speed = j.at("max_speed").get<double>();
  p.max_episode_steps = j.at("max_episode_steps").get<std::size_t>();
  return p;
}

inline nlohmann::json to_json(const ParamRegime& r) {
  using K = ParamRegime::Kind;
  switch (r.kind) {
    case K::Fixed: return {{"kind", "fixed"}};
    case K::Uniform: return {{"kind", "uniform"}, {"lo", r.lo}, {"hi", r.hi}, {"relative", r.relative}};
    case K::Disjoint:
      return {{"kind", "disjoint"}, {"lo", r.lo}, {"hi", r.hi}, {"lo2", r.lo2}, {"hi2", r.hi2}, {"relative", r.relative}};
    case K::Beta: return {{"kind", "beta"}, {"a", r.a}, {"b", r.b}};
  }
  return {};
}

inline ParamRegime regime_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InvalidArgument(where + ": regime needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw InvalidArgument(where + ": missing number '" + key + "'");
    return j[key].get<double>();
  };
  const bool relative = j.value("relative", false);
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : j.items()) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) throw InvalidArgument(where + ": unknown key '" + k + "' for " + kind + " regime");
    }
  };
  ParamRegime r;
  if (kind == "fixed") {
    allow({"kind"});
  } else if (kind == "uniform") {
    allow({"kind", "lo", "hi", "relative"});
    r = ParamRegime::uniform(num("lo"), num("hi"), relative);
  } else if (kind == "disjoint") {
    allow({"kind", "lo", "hi", "lo2", "hi2", "relative"});
    r = ParamRegime::disjoint(num("lo"), num("hi"), num("lo2"), num("hi2"), relative);
  } else if (kind == "beta") {
    allow({"kind", "a", "b"});
    r = ParamRegime::beta(num("a"), num("b"));
  } else {
    throw InvalidArgument(where + ": unknown regime kind '" + kind + "'");
  }
  r.validate(where);
  return r;
}

inline nlohmann::json to_json(const ResampleSpec& spec) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, r] : spec) j[name] = to_json(r);
  return j;
}

inline ResampleSpec spec_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + ": resample spec must be an object");
  ResampleSpec spec;
  for (const auto& [name, r] : j.items()) spec[name] = regime_from_json(r, where + "." + name);
  return spec;
}

}  // namespace claclab::envs
