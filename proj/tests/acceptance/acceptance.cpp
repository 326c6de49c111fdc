// Acceptance runner. Each numbered check prints one PASS/FAIL line; with no
// numbers on the command line every check runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <sys/wait.h>

#include "../support/loss_oracle.hpp"
#include "../support/nchain_dp.hpp"
#include "claclab/distrib.hpp"
#include "claclab/harness.hpp"

using namespace claclab;
using agents::Algorithm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path out;
  std::size_t workers = 1;
  std::uint64_t seed = 2024;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary | std::ios::trunc) << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Networks of width 64 and minibatches of 64: the learning checks run on one
// CPU core, where the 256/256 defaults would take several hours.
agents::AgentConfig desk_agent() {
  agents::AgentConfig c;
  c.hidden = {64, 64};
  c.batch_size = 64;
  return c;
}

// ---------------------------------------------------------------- 1

struct GradInstance {
  agents::NetworkSet nets;
  replay::Batch batch;
  distrib::MarginalEstimate marginal;
  ndiff::Tensor noise;
  Algorithm alg;
  double coef;
};

GradInstance grad_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t obs = 2 + rng.index(5), act = 1 + rng.index(2);
  GradInstance g;
  agents::AgentConfig cfg;
  cfg.hidden = {16, 16};
  g.nets = agents::NetworkSet::create(obs, act, cfg, rng);
  for (ndiff::Mlp* net : {&g.nets.value, &g.nets.value_target, &g.nets.q1, &g.nets.q2, &g.nets.policy}) {
    for (std::size_t l = 0; l < net->num_layers(); ++l) {
      for (double& v : net->bias(l).values()) v = rng.uniform(-0.3, 0.3);
    }
  }
  replay::Transition t;
  for (std::size_t d = 0; d < obs; ++d) {
    t.state.push_back(rng.uniform(-1, 1));
    t.next_state.push_back(rng.uniform(-1, 1));
  }
  for (std::size_t d = 0; d < act; ++d) {
    t.action_pre_squash.push_back(rng.uniform(-1.5, 1.5));
    t.action.push_back(std::tanh(t.action_pre_squash.back()));
  }
  t.reward = rng.uniform(-1, 0);
  t.done = rng.uniform() < 0.2;
  g.batch = replay::make_batch(std::vector<replay::Transition>{t});
  g.marginal = distrib::MarginalEstimate(act, 0.01);
  std::vector<double> mu(act), var(act);
  for (std::size_t d = 0; d < act; ++d) {
    mu[d] = rng.uniform(-0.5, 0.5);
    var[d] = rng.uniform(0.3, 1.5);
  }
  distrib::marginal_update(g.marginal, mu, var, 1.0);
  g.noise = agents::standard_normal(1, act, rng);
  g.alg = static_cast<Algorithm>(seed % 3);
  g.coef = rng.uniform(0.0, 1.0);
  return g;
}

// ||fd - analytic|| / max(||fd||, ||analytic||) over every parameter of `net`.
template <typename LossFn>
double fd_relative_error(ndiff::Mlp& net, const ndiff::Grads& grads, LossFn loss) {
  const double h = 1e-5;
  double diff2 = 0, fd2 = 0, an2 = 0;
  for (std::size_t p = 0; p < net.params().size(); ++p) {
    for (std::size_t i = 0; i < net.params()[p].size(); ++i) {
      double& x = net.params()[p][i];
      const double saved = x;
      x = saved + h;
      const double up = loss();
      x = saved - h;
      const double down = loss();
      x = saved;
      const double fd = (up - down) / (2 * h);
      const double an = grads.tensors[p][i];
      diff2 += (fd - an) * (fd - an);
      fd2 += fd * fd;
      an2 += an * an;
    }
  }
  const double scale = std::sqrt(std::max({fd2, an2, 1e-300}));
  return std::sqrt(diff2) / scale;
}

Outcome criterion_1(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_v = 0, worst_q = 0, worst_pi = 0;
  int bad = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto g = grad_instance(1000 + i);
    const auto v = agents::value_loss_grad(g.nets, g.batch, g.marginal, g.alg, g.coef, g.noise);
    const double ev = fd_relative_error(g.nets.value, v.grads,
                                        [&] { return oracle::oracle_value_loss(g.nets, g.batch, g.marginal, g.alg, g.coef, g.noise); });
    const auto y = agents::q_targets(g.nets, g.batch, 0.99);
    const auto q = agents::q_loss_grad(g.nets.q1, g.batch, y);
    const double eq = fd_relative_error(g.nets.q1, q.grads, [&] { return oracle::oracle_q_loss(g.nets.q1, g.batch, y); });
    const auto pi = agents::policy_loss_grad(g.nets, g.batch, g.marginal, g.alg, g.coef, g.noise);
    const double ep = fd_relative_error(g.nets.policy, pi.grads,
                                        [&] { return oracle::oracle_policy_loss(g.nets, g.batch, g.marginal, g.alg, g.coef, g.noise); });
    worst_v = std::max(worst_v, ev);
    worst_q = std::max(worst_q, eq);
    worst_pi = std::max(worst_pi, ep);
    bad += (ev > 1e-4) + (eq > 1e-4) + (ep > 1e-4);
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0, "150 instances, worst relative error V " + sci(worst_v) + ", Q " + sci(worst_q) + ", pi " +
                                       sci(worst_pi) + " (limit 1e-4), " + fmt(secs, 1) + " s"};
}

// ---------------------------------------------------------------- 2

Outcome criterion_2(const Context&) {
  Rng rng(7);
  double worst = 0, worst_oracle = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> pmf(16);
    double total = 0;
    for (double& p : pmf) total += (p = rng.gamma(0.7));
    for (double& p : pmf) p /= total;
    const distrib::DiscreteJoint joint(4, 4, pmf);
    const double direct = distrib::discrete_mi(joint);
    const double via_entropy = distrib::mi_from_entropies(joint);
    // Test-side double sum on the raw table.
    double ps[4] = {0, 0, 0, 0}, pa[4] = {0, 0, 0, 0}, mi = 0;
    for (int s = 0; s < 4; ++s)
      for (int a = 0; a < 4; ++a) {
        ps[s] += pmf[4 * s + a];
        pa[a] += pmf[4 * s + a];
      }
    for (int s = 0; s < 4; ++s)
      for (int a = 0; a < 4; ++a)
        if (pmf[4 * s + a] > 0) mi += pmf[4 * s + a] * std::log(pmf[4 * s + a] / (ps[s] * pa[a]));
    worst = std::max(worst, std::abs(direct - via_entropy));
    worst_oracle = std::max(worst_oracle, std::abs(mi - via_entropy));
  }
  return {worst <= 1e-10 && worst_oracle <= 1e-10,
          "100 pmfs, max |double-sum - entropy-difference| " + sci(worst) + " (library), " + sci(worst_oracle) + " (oracle)"};
}

// ---------------------------------------------------------------- 3

Outcome criterion_3(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> w{0.2, 0.5, 0.3}, mu{1.0, 3.0, 6.0}, var{0.5, 1.0, 2.0};
  double mean = 0, second = 0;
  for (int k = 0; k < 3; ++k) {
    mean += w[k] * mu[k];
    second += w[k] * (var[k] + mu[k] * mu[k]);
  }
  const double variance = second - mean * mean;
  distrib::MarginalEstimate m(1, 1.0);
  Rng rng(11);
  for (int n = 1; n <= 100'000; ++n) {
    const double u = rng.uniform();
    const int k = u < w[0] ? 0 : (u < w[0] + w[1] ? 1 : 2);
    distrib::marginal_update(m, std::vector<double>{mu[k]}, std::vector<double>{var[k]}, 1.0 / n);
  }
  const double em = std::abs(m.mean[0] - mean) / mean, ev = std::abs(m.variance[0] - variance) / variance;
  return {em <= 0.01 && ev <= 0.01, "mean " + fmt(m.mean[0], 4) + " vs " + fmt(mean, 4) + " (" + fmt(100 * em, 2) + "%), variance " +
                                        fmt(m.variance[0], 4) + " vs " + fmt(variance, 4) + " (" + fmt(100 * ev, 2) + "%), " +
                                        fmt(seconds_since(t0), 2) + " s"};
}

// ---------------------------------------------------------------- 4

std::string transition_bytes(const replay::ReplayBuffer& buf) {
  std::string out;
  auto put = [&](const std::vector<double>& v) { out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double)); };
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const auto& t = buf[i];
    put(t.state);
    put(t.action);
    put(t.action_pre_squash);
    put({t.reward, t.done ? 1.0 : 0.0});
    put(t.next_state);
  }
  return out;
}

std::string param_bytes(const agents::NetworkSet& n) {
  std::string out;
  for (const ndiff::Mlp* net : {&n.value, &n.value_target, &n.q1, &n.q2, &n.policy}) {
    for (const auto& t : net->params()) out.append(reinterpret_cast<const char*>(t.values().data()), t.size() * sizeof(double));
  }
  return out;
}

Outcome criterion_4(const Context& ctx) {
  envs::NChainParams chain = envs::nchain_default_params(derive_seed(ctx.seed, SeedStream::Resample, 0, 1));
  std::map<std::string, std::pair<std::string, std::string>> traces;
  for (auto alg : {Algorithm::CLAC, Algorithm::SAC, Algorithm::MIRL}) {
    agents::AgentConfig cfg;  // full-size networks: only 1K steps
    cfg.algorithm = alg;
    cfg.coefficient = 0.0;
    cfg.mirl_epsilon = 0.0;
    cfg.mirl_horizon = 1000;
    agents::Agent agent(cfg, chain.n_states, 1, ctx.seed);
    envs::NChain env(chain, derive_seed(ctx.seed, SeedStream::Environment));
    replay::ReplayBuffer buf(chain.n_states, 1);
    for (int i = 0; i < 1000; ++i) agent.train_step(env, buf);
    traces[agents::to_string(alg)] = {transition_bytes(buf), param_bytes(agent.nets())};
  }
  const auto& c = traces["clac"];
  const bool sac = traces["sac"] == c, mirl = traces["mirl"] == c;
  return {sac && mirl, std::string("1000 steps, trajectory and parameters: sac ") + (sac ? "identical" : "DIFFERENT") +
                           ", mirl " + (mirl ? "identical" : "DIFFERENT") + " to clac (" + std::to_string(c.first.size()) +
                           " trajectory bytes)"};
}

// ---------------------------------------------------------------- 5

Outcome criterion_5(const Context& ctx) {
  harness::ExperimentSpec spec;
  spec.algorithms = {Algorithm::CLAC};
  spec.agent = desk_agent();
  spec.agent.target_capacity = 0.3;
  spec.total_steps = 50'000;
  spec.n_agents = 1;
  spec.base_seed = ctx.seed;
  spec.record_mi_trace = true;
  spec.validate();
  const auto run = harness::expand_runs(spec).front();
  const auto r = harness::run_single(spec, run);
  if (r.diverged) return {false, "run diverged: " + r.error};
  const std::size_t n = r.mi_trace.size(), tail = n / 10;
  double mi = 0;
  for (std::size_t i = n - tail; i < n; ++i) mi += r.mi_trace[i];
  mi /= static_cast<double>(tail);
  std::string trace = "step,mean_mi\n";
  for (std::size_t i = 0; i < n; i += 100) trace += std::to_string(i + 1) + "," + format_double(r.mi_trace[i]) + "\n";
  write_text(ctx.out / "c5_mi_trace.csv", trace);
  return {std::abs(mi - 0.3) <= 0.1, "mean MI over final " + std::to_string(tail) + " steps " + fmt(mi, 4) +
                                         " nats (target 0.3 +- 0.1), final beta " + fmt(r.agent->coefficient(), 4)};
}

// ---------------------------------------------------------------- 6

Outcome criterion_6(const Context& ctx) {
  harness::ExperimentSpec spec;
  spec.algorithms = {Algorithm::CLAC, Algorithm::SAC};
  spec.agent = desk_agent();
  spec.total_steps = 50'000;
  spec.n_agents = 8;
  spec.base_seed = ctx.seed;
  const auto nominal = harness::resolved_nominal(spec);
  const auto dp = oracle::solve_chain_dp(nominal.nchain.hidden_values, nominal.nchain.sharpness,
                                         nominal.nchain.max_episode_steps);

  // Coarse coefficient sweep at reduced length, then the full run at the winner.
  std::string sweep_note;
  for (auto alg : spec.algorithms) {
    auto small = spec;
    small.n_agents = 2;
    small.total_steps = 15'000;
    small.base_seed = derive_seed(ctx.seed, SeedStream::Sweep);
    const auto sweep = harness::coefficient_sweep({0.05, 0.2, 0.5}, harness::training_evaluator(small, alg, ctx.workers));
    spec.coefficients[alg] = sweep.best;
    sweep_note += agents::to_string(alg) + "=" + format_double(sweep.best) + " ";
  }
  const auto results = harness::run_training(spec, ctx.workers, ctx.out / "c6");
  std::vector<harness::RunRows> rows;
  for (const auto& r : results) {
    if (r.diverged) return {false, r.run.run_id + " diverged: " + r.error};
    rows.push_back(r.rows);
  }
  const auto summary = harness::aggregate(rows, 1000, spec.phase_length());
  harness::write_summary_csv(ctx.out / "c6", summary);
  bool pass = dp.optimal_return >= -40.0;
  std::string detail = "DP optimum " + fmt(dp.optimal_return) + "; coefficients " + sweep_note + ";";
  for (const auto& w : summary.phase_windows) {
    pass = pass && w.stats.n == 8 && w.stats.mean >= -40.0;
    detail += " " + w.algorithm + " " + fmt(w.stats.mean) + " +- " + fmt(w.stats.std) + " (n=" + std::to_string(w.stats.n) + ")";
  }
  return {pass && summary.phase_windows.size() == 2, detail + "; threshold -40"};
}

// ---------------------------------------------------------------- 7

Outcome criterion_7(const Context& ctx) {
  harness::ExperimentSpec spec;
  spec.resample = {{"hidden_values", envs::ParamRegime::beta(10, 25)}};
  spec.algorithms = {Algorithm::CLAC, Algorithm::SAC, Algorithm::MIRL};
  spec.agent = desk_agent();
  spec.agent.coefficient = 0.5;
  spec.total_steps = 50'000;
  spec.resample_interval = 10'000;
  spec.n_agents = 8;
  spec.base_seed = ctx.seed;
  const auto results = harness::run_training(spec, ctx.workers, ctx.out / "c7");

  bool complete = true, shared = true;
  std::vector<harness::RunRows> rows;
  for (const auto& r : results) {
    complete = complete && !r.diverged && r.phase_params.size() == 5;
    shared = shared && r.phase_params == results.front().phase_params;
    rows.push_back(r.rows);
  }
  // Determinism: replicate 0 of every algorithm again, byte for byte.
  bool repeat = true;
  for (const auto& run : harness::expand_runs(spec)) {
    if (run.replicate != 0) continue;
    const fs::path again = ctx.out / "c7_repeat" / (run.run_id + ".csv");
    fs::create_directories(again.parent_path());
    {
      harness::MetricWriter w(again);
      harness::run_single(spec, run, &w);
    }
    repeat = repeat && slurp(again) == slurp(harness::metric_path(ctx.out / "c7", run.run_id));
  }
  const auto summary = harness::aggregate(rows, 1000, spec.phase_length());
  harness::write_summary_csv(ctx.out / "c7", summary);
  std::map<std::string, harness::MeanStd> last;
  for (const auto& w : summary.phase_windows) {
    if (w.phase == 4) last[w.algorithm] = w.stats;
  }
  const auto& c = last["clac"];
  const auto& s = last["sac"];
  const auto& m = last["mirl"];
  const bool ordered = c.mean >= s.mean && c.mean >= m.mean;
  const bool separated = c.mean - c.stderr_mean() > std::max(s.mean + s.stderr_mean(), m.mean + m.stderr_mean());
  std::string detail = "final phase last-10%: clac " + fmt(c.mean) + " +- " + fmt(c.stderr_mean()) + " se, sac " + fmt(s.mean) +
                       " +- " + fmt(s.stderr_mean()) + ", mirl " + fmt(m.mean) + " +- " + fmt(m.stderr_mean()) +
                       "; ordering clac>=sac,mirl " + (ordered ? "holds" : "does not hold") +
                       (ordered ? (separated ? " (se bands separated)" : " (se bands overlap)") : "") +
                       "; deterministic repeat " + (repeat ? "identical" : "DIFFERENT") + "; shared phase params " +
                       (shared ? "yes" : "NO");
  return {complete && shared && repeat, detail};
}

// ---------------------------------------------------------------- 8

struct DropStats {
  std::vector<double> drops;
  harness::MeanStd fixed, random, extreme;
};

Outcome criterion_8(const Context& ctx) {
  harness::ExperimentSpec spec;
  spec.env.kind = envs::EnvKind::Pendulum;
  spec.algorithms = {Algorithm::CLAC, Algorithm::SAC};
  spec.agent = desk_agent();
  spec.total_steps = 50'000;
  spec.n_agents = 20;
  spec.base_seed = ctx.seed;
  // Each algorithm keeps the coefficient that scores best on the unperturbed task.
  std::string sweep_note;
  for (auto alg : spec.algorithms) {
    auto small = spec;
    small.n_agents = 2;
    small.total_steps = 15'000;
    small.base_seed = derive_seed(ctx.seed, SeedStream::Sweep);
    const auto sweep = harness::coefficient_sweep({0.05, 0.2, 0.5, 1.0, 2.0}, harness::training_evaluator(small, alg, ctx.workers));
    spec.coefficients[alg] = sweep.best;
    sweep_note += agents::to_string(alg) + "=" + format_double(sweep.best) + " ";
  }
  const auto results = harness::run_training(spec, ctx.workers, ctx.out / "c8");

  harness::GenEvalConfig g;
  g.resample_count = 50;
  g.seed = ctx.seed;
  std::map<std::string, DropStats> stats;
  std::map<std::string, std::vector<double>> fixed, random, extreme;
  std::string first_eval_csv;
  for (const auto& r : results) {
    if (r.diverged) return {false, r.run.run_id + " diverged: " + r.error};
    std::vector<harness::GenEvalResult> ev;
    for (auto regime : {harness::Regime::TrainFixed, harness::Regime::Random, harness::Regime::Extreme}) {
      ev.push_back(harness::run_generalization_eval(*r.agent, spec.env, regime, g));
    }
    write_text(ctx.out / "c8" / "eval" / r.run.run_id / "eval.csv", harness::gen_eval_csv(ev));
    write_text(ctx.out / "c8" / "eval" / r.run.run_id / "eval_summary.csv", harness::gen_eval_summary_csv(ev));
    if (first_eval_csv.empty()) first_eval_csv = harness::gen_eval_csv(ev);
    const std::string alg = agents::to_string(r.run.algorithm);
    stats[alg].drops.push_back(ev[0].returns.mean - ev[2].returns.mean);
    fixed[alg].push_back(ev[0].returns.mean);
    random[alg].push_back(ev[1].returns.mean);
    extreme[alg].push_back(ev[2].returns.mean);
  }
  // Determinism: retrain and re-evaluate the first run.
  const auto run0 = harness::expand_runs(spec).front();
  const fs::path again = ctx.out / "c8_repeat" / (run0.run_id + ".csv");
  fs::create_directories(again.parent_path());
  std::optional<agents::Agent> agent0;
  {
    harness::MetricWriter w(again);
    agent0 = harness::run_single(spec, run0, &w).agent;
  }
  std::vector<harness::GenEvalResult> ev0;
  for (auto regime : {harness::Regime::TrainFixed, harness::Regime::Random, harness::Regime::Extreme}) {
    ev0.push_back(harness::run_generalization_eval(*agent0, spec.env, regime, g));
  }
  const bool repeat = slurp(again) == slurp(harness::metric_path(ctx.out / "c8", run0.run_id)) &&
                      harness::gen_eval_csv(ev0) == first_eval_csv;

  const auto dc = harness::mean_std(stats["clac"].drops), ds = harness::mean_std(stats["sac"].drops);
  const double pooled = std::sqrt(((dc.n - 1) * dc.std * dc.std + (ds.n - 1) * ds.std * ds.std) / static_cast<double>(dc.n + ds.n - 2));
  const bool within = dc.mean - ds.mean <= pooled;
  std::string detail = "coefficients " + sweep_note + "; ";
  for (const std::string alg : {"clac", "sac"}) {
    detail += alg + " fixed " + fmt(harness::mean_std(fixed[alg]).mean, 1) + " random " + fmt(harness::mean_std(random[alg]).mean, 1) +
              " extreme " + fmt(harness::mean_std(extreme[alg]).mean, 1) + "; ";
  }
  detail += "drop clac " + fmt(dc.mean, 2) + " sac " + fmt(ds.mean, 2) + " pooled sd " + fmt(pooled, 2) + "; clac drop " +
            (dc.mean < ds.mean ? "smaller" : "not smaller") + "; deterministic repeat " + (repeat ? "identical" : "DIFFERENT");
  return {repeat && within, detail};
}

// ---------------------------------------------------------------- 9

Outcome criterion_9(const Context&) {
  envs::NChainParams base;
  base.hidden_values = {0.5, 0.5, 0.5, 0.5};
  const envs::ResampleSpec prior{{"hidden_values", envs::ParamRegime::beta(10, 25)}};
  double total = 0;
  std::size_t count = 0;
  for (std::uint64_t s = 0; s < 25'000; ++s) {
    for (double h : envs::resample(base, prior, s).hidden_values) {
      total += h;
      ++count;
    }
  }
  const double beta_err = std::abs(total / count - 2.0 / 7.0) / (2.0 / 7.0);

  int outside = 0;
  std::string z_note;
  for (double offset : {0.0, 0.02, 0.05, 0.1, 0.2}) {
    envs::NChainParams p;
    p.n_states = 2;
    p.hidden_values = {0.3};
    envs::NChain env(p, 100 + static_cast<std::uint64_t>(offset * 1000));
    const double prob = envs::nchain_advance_probability(0.3 + offset, 0.3, p.sharpness);
    const int n = 100'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      env.reset();
      hits += env.step(std::vector<double>{2 * (0.3 + offset) - 1}).state.terminal;
    }
    const double sigma = std::sqrt(n * prob * (1 - prob));
    const double z = sigma > 0 ? (hits - n * prob) / sigma : (hits == n ? 0.0 : INFINITY);
    outside += std::abs(z) > 3;
    z_note += fmt(z, 2) + " ";
  }

  const auto disjoint = envs::ParamRegime::disjoint(0.90, 0.95, 1.05, 1.10, true);
  Rng rng(5);
  int violations = 0;
  for (int i = 0; i < 100'000; ++i) {
    const double x = disjoint.draw(9.8, rng) / 9.8;
    violations += !((x >= 0.90 - 1e-12 && x <= 0.95 + 1e-12) || (x >= 1.05 - 1e-12 && x <= 1.10 + 1e-12));
  }
  return {beta_err <= 0.01 && outside == 0 && violations == 0,
          "beta mean " + fmt(total / count, 5) + " vs " + fmt(2.0 / 7.0, 5) + " (" + fmt(100 * beta_err, 3) + "%); advance z-scores " +
              z_note + "(|z|<=3); disjoint violations " + std::to_string(violations) + " / 100000"};
}

// ---------------------------------------------------------------- 10

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLACLAB_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_10(const Context& ctx) {
  const fs::path root = ctx.out / "c10";
  fs::remove_all(root);
  fs::create_directories(root);
  write_text(root / "config.json", R"({
  "seed": 17,
  "env": {"name": "nchain"},
  "agent": {"hidden": [32, 32], "batch_size": 32},
  "experiment": {"algorithms": ["clac", "sac", "mirl"], "total_steps": 3000, "resample_interval": 1000, "n_agents": 2},
  "eval": {"resample_count": 10, "regimes": {"extreme": {"hidden_values": {"kind": "uniform", "lo": 0.6, "hi": 0.9}}}},
  "plot": {"bucket": 500}
}
)");
  const std::string cfg = (root / "config.json").string();
  int codes = 0, compared = 0, differing = 0;
  for (const char* tag : {"a", "b"}) {
    codes += run_cli("train --config " + cfg + " --out " + (root / tag).string());
    for (const char* alg : {"clac", "sac", "mirl"}) {
      codes += run_cli("eval " + (root / tag / "checkpoints" / (std::string(alg) + "-r01")).string() + " --config " + cfg +
                       " --out " + (root / tag / "eval" / alg).string());
    }
  }
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (e.path().extension() != ".csv") continue;
    const fs::path twin = root / "b" / fs::relative(e.path(), root / "a");
    ++compared;
    differing += !fs::exists(twin) || slurp(twin) != slurp(e.path());
  }
  return {codes == 0 && compared > 0 && differing == 0, "train + eval repeated: " + std::to_string(compared) + " CSV files compared, " +
                                                            std::to_string(differing) + " differ, nonzero exit codes " +
                                                            std::to_string(codes)};
}

const std::map<int, std::pair<std::string, std::function<Outcome(const Context&)>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome(const Context&)>>> table = {
      {1, {"gradient oracle suite", criterion_1}},
      {2, {"discrete MI two-route equivalence", criterion_2}},
      {3, {"marginal estimator convergence", criterion_3}},
      {4, {"coefficient-zero degeneracy", criterion_4}},
      {5, {"auto-beta capacity tracking", criterion_5}},
      {6, {"N-chain learning", criterion_6}},
      {7, {"resampled N-chain ordering", criterion_7}},
      {8, {"pendulum generalization drop", criterion_8}},
      {9, {"environment statistics", criterion_9}},
      {10, {"CLI determinism", criterion_10}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claclab acceptance checks"};
  std::vector<int> which;
  Context ctx;
  std::string out = "acceptance_out";
  app.add_option("criteria", which, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--out", out, "Directory for run artifacts");
  app.add_option("--seed", ctx.seed, "Base seed");
  app.add_option("--workers", ctx.workers, "Parallel runs");
  CLI11_PARSE(app, argc, argv);
  ctx.out = out;
  fs::create_directories(ctx.out);
  if (which.empty()) {
    for (const auto& [n, _] : criteria()) which.push_back(n);
  }

  int failures = 0;
  for (int n : which) {
    const auto& [name, fn] = criteria().at(n);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << std::setw(2) << n << " " << std::left << std::setw(36) << name << std::right
              << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << " [" << fmt(seconds_since(t0), 1) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
