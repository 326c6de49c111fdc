#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "claclab/agents/agent.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/envs/any_env.hpp"
#include "claclab/harness/aggregate.hpp"

namespace claclab::harness {

enum class Regime { TrainFixed, Random, Extreme };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::TrainFixed:
      return "train-fixed";
    case Regime::Random:
      return "random";
    case Regime::Extreme:
      return "extreme";
  }
  return "?";
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "train-fixed") return Regime::TrainFixed;
  if (s == "random") return Regime::Random;
  if (s == "extreme") return Regime::Extreme;
  throw InvalidArgument("unknown regime '" + s + "' (expected train-fixed, random or extreme)");
}

/// Default parameter distributions per regime. Pendulum: mass, gravity and
/// torque limit uniform on 95-105% of nominal (random) or on 90-95% and
/// 105-110% (extreme). N-chain: hidden values from the chain's Beta prior;
/// it has no out-of-band regime of its own.
inline envs::ResampleSpec default_regime_spec(const envs::EnvConfig& env, Regime regime) {
  using envs::ParamRegime;
  if (regime == Regime::TrainFixed) return {};
  if (env.kind == envs::EnvKind::Pendulum) {
    const ParamRegime r = regime == Regime::Random ? ParamRegime::uniform(0.95, 1.05, true)
                                                   : ParamRegime::disjoint(0.90, 0.95, 1.05, 1.10, true);
    return {{"mass", r}, {"gravity", r}, {"max_torque", r}};
  }
  if (regime == Regime::Random) {
    return {{"hidden_values", ParamRegime::beta(env.nchain.beta_a, env.nchain.beta_b)}};
  }
  throw InvalidArgument("nchain has no default extreme regime; supply one in the config");
}

struct GenEvalConfig {
  std::size_t resample_count = 50;
  std::size_t episodes = 1;  // per resample
  std::uint64_t seed = 0;
  std::optional<envs::ResampleSpec> spec;  // replaces the regime default
};

struct GenEvalResult {
  Regime regime = Regime::TrainFixed;
  std::size_t resample_count = 0;
  MeanStd returns;                       // across per-resample mean returns
  std::vector<double> resample_returns;  // one mean per resample
  std::vector<envs::EnvConfig> params;   // parameters used, for auditing
};

/// Undiscounted return of one deterministic-mode episode.
inline double run_eval_episode(const agents::Agent& agent, envs::AnyEnv& env, std::uint64_t reset_seed) {
  env.reset(reset_seed);
  double ret = 0.0;
  while (!env.state().done) ret += env.step(agent.act_deterministic(env.state().observation)).reward;
  return ret;
}

/// Evaluates `agent` on `resample_count` parameter draws of `regime` around
/// the training parameters. Draw seeds depend on (cfg.seed, regime, index) only.
/// The agent is taken by const reference and never modified.
inline GenEvalResult run_generalization_eval(const agents::Agent& agent, const envs::EnvConfig& train_env, Regime regime,
                                             const GenEvalConfig& cfg) {
  if (cfg.resample_count == 0 || cfg.episodes == 0) throw InvalidArgument("generalization: counts must be positive");
  envs::AnyEnv env(train_env, 0);
  if (env.observation_dim() != agent.nets().obs_dim || env.action_dim() != agent.nets().act_dim) {
    throw InvalidArgument("generalization: checkpoint does not match the environment's dimensions");
  }
  const envs::ResampleSpec spec = cfg.spec ? *cfg.spec : default_regime_spec(train_env, regime);
  const auto regime_tag = static_cast<std::uint64_t>(regime);

  GenEvalResult out;
  out.regime = regime;
  out.resample_count = cfg.resample_count;
  for (std::size_t i = 0; i < cfg.resample_count; ++i) {
    const envs::EnvConfig params =
        spec.empty() ? train_env : envs::resample(train_env, spec, derive_seed(cfg.seed, SeedStream::Resample, regime_tag, i));
    env.set_params(params);
    double total = 0.0;
    for (std::size_t e = 0; e < cfg.episodes; ++e) {
      total += run_eval_episode(agent, env, derive_seed(cfg.seed, SeedStream::Evaluation, i, e));
    }
    out.resample_returns.push_back(total / static_cast<double>(cfg.episodes));
    out.params.push_back(params);
  }
  out.returns = mean_std(out.resample_returns);
  return out;
}

inline constexpr const char* kGenEvalHeader = "regime,resample,return";

inline std::string gen_eval_csv(const std::vector<GenEvalResult>& results) {
  std::string s = std::string(kGenEvalHeader) + '\n';
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.resample_returns.size(); ++i) {
      s += to_string(r.regime) + ',' + std::to_string(i) + ',' + format_double(r.resample_returns[i]) + '\n';
    }
  }
  return s;
}

inline constexpr const char* kGenSummaryHeader = "regime,resample_count,mean_return,std_return";

inline std::string gen_eval_summary_csv(const std::vector<GenEvalResult>& results) {
  std::string s = std::string(kGenSummaryHeader) + '\n';
  for (const auto& r : results) {
    s += to_string(r.regime) + ',' + std::to_string(r.resample_count) + ',' + format_double(r.returns.mean) + ',' +
         format_double(r.returns.std) + '\n';
  }
  return s;
}

}  // namespace claclab::harness
