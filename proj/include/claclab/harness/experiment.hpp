#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claclab/agents/agent.hpp"
#include "claclab/agents/checkpoint.hpp"
#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/envs/any_env.hpp"
#include "claclab/harness/metrics.hpp"
#include "claclab/harness/worker_pool.hpp"
#include "claclab/replay/replay_buffer.hpp"

namespace claclab::harness {

using agents::Algorithm;

struct ExperimentSpec {
  envs::EnvConfig env;          // nominal parameters
  envs::ResampleSpec resample;  // redrawn at every phase boundary when resampling
  std::vector<Algorithm> algorithms = {Algorithm::CLAC, Algorithm::SAC, Algorithm::MIRL};
  std::map<Algorithm, double> coefficients;  // overrides agent.coefficient per algorithm
  agents::AgentConfig agent;                 // template; algorithm and coefficient are filled per run
  std::uint64_t total_steps = 50'000;
  std::uint64_t resample_interval = 0;  // 0: a single phase on the nominal parameters
  std::size_t n_agents = 1;
  std::size_t eval_episodes = 1;
  std::uint64_t base_seed = 0;
  std::string run_tag;          // prefix for run ids, used by sweeps
  bool record_mi_trace = false;  // keep the per-step policy MI estimate

  bool resampling() const { return resample_interval > 0; }
  std::size_t phases() const { return resampling() ? static_cast<std::size_t>(total_steps / resample_interval) : 1; }
  std::uint64_t phase_length() const { return resampling() ? resample_interval : total_steps; }

  void validate() const {
    if (algorithms.empty()) throw InvalidArgument("experiment: no algorithms");
    if (n_agents == 0) throw InvalidArgument("experiment: n_agents must be >= 1");
    if (total_steps == 0) throw InvalidArgument("experiment: total_steps must be positive");
    if (resampling() && total_steps % resample_interval != 0) {
      throw InvalidArgument("experiment: total_steps must be divisible by resample_interval");
    }
    if (resampling() && resample.empty()) throw InvalidArgument("experiment: resampling needs a resample spec");
    if (eval_episodes == 0) throw InvalidArgument("experiment: eval_episodes must be >= 1");
    for (const auto& [alg, c] : coefficients) {
      if (!(c >= 0.0)) throw InvalidArgument("experiment: coefficient for " + agents::to_string(alg) + " must be >= 0");
    }
    agent.validate();
  }

  agents::AgentConfig agent_for(Algorithm alg) const {
    agents::AgentConfig c = agent;
    c.algorithm = alg;
    if (auto it = coefficients.find(alg); it != coefficients.end()) c.coefficient = it->second;
    if (alg != Algorithm::CLAC) c.target_capacity.reset();
    if (alg == Algorithm::MIRL && c.mirl_horizon == 0) c.mirl_horizon = total_steps;
    return c;
  }
};

/// Nominal parameters with any missing N-chain hidden values filled from the
/// chain's Beta prior. Depends only on base_seed.
inline envs::EnvConfig resolved_nominal(const ExperimentSpec& spec) {
  envs::EnvConfig env = spec.env;
  if (env.kind == envs::EnvKind::NChain && env.nchain.hidden_values.empty()) {
    const envs::ResampleSpec prior{{"hidden_values", envs::ParamRegime::beta(env.nchain.beta_a, env.nchain.beta_b)}};
    env = envs::resample(env, prior, derive_seed(spec.base_seed, SeedStream::Resample, 0, 1));
  }
  return env;
}

/// Parameters in force during `phase`. The draw depends on (base_seed, phase)
/// only, so every algorithm and replicate sees the same sequence.
inline envs::EnvConfig phase_env(const ExperimentSpec& spec, std::size_t phase) {
  const envs::EnvConfig nominal = resolved_nominal(spec);
  if (!spec.resampling()) return nominal;
  return envs::resample(nominal, spec.resample, derive_seed(spec.base_seed, SeedStream::Resample, phase));
}

struct RunSpec {
  std::string run_id;
  Algorithm algorithm = Algorithm::CLAC;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
};

/// Replicate r gets the same seed under every algorithm.
inline std::vector<RunSpec> expand_runs(const ExperimentSpec& spec) {
  std::vector<RunSpec> runs;
  for (Algorithm alg : spec.algorithms) {
    for (std::size_t r = 0; r < spec.n_agents; ++r) {
      std::string id = spec.run_tag + agents::to_string(alg) + "-r" + (r < 10 ? "0" : "") + std::to_string(r);
      runs.push_back({std::move(id), alg, r, derive_seed(spec.base_seed, SeedStream::Agent, r)});
    }
  }
  return runs;
}

struct RunResult {
  RunSpec run;
  std::vector<MetricRow> rows;
  bool diverged = false;
  std::string error;
  std::optional<agents::Agent> agent;     // final state
  std::vector<double> mi_trace;           // per env step, when requested
  std::vector<envs::EnvConfig> phase_params;
};

namespace detail {

struct EpisodeAccumulator {
  double ret = 0.0;
  std::size_t length = 0;
  std::size_t updates = 0;
  double mi = 0.0, entropy = 0.0, loss_v = 0.0, loss_q = 0.0, loss_pi = 0.0;

  void add(const agents::StepInfo& s) {
    ret += s.reward;
    ++length;
    if (!s.updated) return;
    ++updates;
    mi += s.mean_mi;
    entropy += s.mean_entropy;
    loss_v += s.loss_v;
    loss_q += s.loss_q;
    loss_pi += s.loss_pi;
  }

  MetricRow row(const RunSpec& run, std::size_t phase, std::uint64_t env_step, double beta) const {
    const double n = updates > 0 ? static_cast<double>(updates) : 1.0;
    return {run.run_id, agents::to_string(run.algorithm), run.seed, phase, env_step, ret, length,
            mi / n, entropy / n, beta, loss_v / n, loss_q / n, loss_pi / n};
  }
};

}  // namespace detail

/// Trains one agent through every phase. Networks and the replay buffer carry
/// over phase boundaries; the episode in flight at a boundary is dropped.
/// Divergence ends the run early with `diverged` set.
inline RunResult run_single(const ExperimentSpec& spec, const RunSpec& run, MetricWriter* writer = nullptr) {
  RunResult result;
  result.run = run;
  const agents::AgentConfig cfg = spec.agent_for(run.algorithm);
  envs::EnvConfig env_cfg = phase_env(spec, 0);
  envs::AnyEnv env(env_cfg, derive_seed(run.seed, SeedStream::Environment));
  agents::Agent agent(cfg, env.observation_dim(), env.action_dim(), run.seed);
  replay::ReplayBuffer buffer(env.observation_dim(), env.action_dim(), cfg.replay_capacity);
  if (spec.record_mi_trace) result.mi_trace.reserve(spec.total_steps);

  std::uint64_t step = 0;
  try {
    for (std::size_t phase = 0; phase < spec.phases(); ++phase) {
      if (phase > 0) {
        env_cfg = phase_env(spec, phase);
        env.set_params(env_cfg);
      }
      result.phase_params.push_back(env_cfg);
      env.reset();
      detail::EpisodeAccumulator ep;
      for (std::uint64_t t = 0; t < spec.phase_length(); ++t) {
        const agents::StepInfo info = agent.train_step(env, buffer);
        ++step;
        ep.add(info);
        if (spec.record_mi_trace) result.mi_trace.push_back(info.mean_mi);
        if (info.episode_done) {
          MetricRow row = ep.row(run, phase, step, agent.coefficient());
          if (writer) writer->append(row);
          result.rows.push_back(std::move(row));
          ep = {};
        }
      }
    }
  } catch (const TrainingDivergence& e) {
    result.diverged = true;
    result.error = e.what();
  }
  result.agent = std::move(agent);
  return result;
}

/// Paths written by run_training under an output directory.
inline std::filesystem::path metric_path(const std::filesystem::path& out, const std::string& run_id) {
  return out / "metrics" / (run_id + ".csv");
}
inline std::filesystem::path checkpoint_path(const std::filesystem::path& out, const std::string& run_id) {
  return out / "checkpoints" / run_id;
}

/// Checkpoint sidecar data needed to evaluate the agent later.
inline nlohmann::json checkpoint_extra(const ExperimentSpec& spec, const RunResult& r) {
  return {{"run_id", r.run.run_id},
          {"seed", r.run.seed},
          {"env", resolved_nominal(spec).to_json_doc()},
          {"final_env", r.phase_params.empty() ? nlohmann::json(nullptr) : r.phase_params.back().to_json_doc()},
          {"resample", envs::to_json(spec.resample)},
          {"diverged", r.diverged}};
}

/// Runs every (algorithm, replicate) pair on a worker pool. With an output
/// directory, each run streams its own metric file and leaves a checkpoint.
inline std::vector<RunResult> run_training(const ExperimentSpec& spec, std::size_t workers = 1,
                                           const std::optional<std::filesystem::path>& out = std::nullopt) {
  spec.validate();
  const auto runs = expand_runs(spec);
  std::vector<RunResult> results(runs.size());
  if (out) std::filesystem::create_directories(*out / "metrics");
  parallel_for(runs.size(), workers, [&](std::size_t i) {
    std::optional<MetricWriter> writer;
    if (out) writer.emplace(metric_path(*out, runs[i].run_id));
    results[i] = run_single(spec, runs[i], writer ? &*writer : nullptr);
    if (out) agents::save_agent(*results[i].agent, checkpoint_path(*out, runs[i].run_id), checkpoint_extra(spec, results[i]));
  });
  return results;
}

}  // namespace claclab::harness
