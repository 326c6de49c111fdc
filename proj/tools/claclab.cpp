// claclab: train, evaluate, sweep and plot CLAC/SAC/MIRL agents.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "claclab/agents.hpp"
#include "claclab/cli/config.hpp"
#include "claclab/harness.hpp"

namespace fs = std::filesystem;
using namespace claclab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitDivergence = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> workers;

  void attach(CLI::App* app, bool config_required = false) {
    auto* c = app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    if (config_required) c->required();
    app->add_option("--set", sets, "Override a config field, e.g. --set agent.beta=0.5 (repeatable)");
    app->add_option("--seed", seed, "Base seed (overrides config seed)");
    app->add_option("--out", out, "Output directory (overrides config out)");
    app->add_option("--workers", workers, "Parallel runs (default: $CLACLAB_WORKERS, then config)");
  }

  cli::RunConfig resolve() const {
    std::vector<std::string> all = sets;
    if (seed) all.push_back("seed=" + std::to_string(*seed));
    if (!out.empty()) all.push_back("out=" + nlohmann::json(out).dump());
    if (workers) {
      all.push_back("workers=" + std::to_string(*workers));
    } else if (const char* env = std::getenv("CLACLAB_WORKERS")) {
      all.push_back(std::string("workers=") + env);
    }
    return cli::load_config(config.empty() ? std::nullopt : std::optional<fs::path>(config), all);
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

int cmd_train(const CommonOptions& opts) {
  const cli::RunConfig cfg = opts.resolve();
  const fs::path out = cfg.out;
  fs::create_directories(out);
  cli::write_resolved(cfg, out / "config.resolved.json");

  nlohmann::json phases = nlohmann::json::array();
  for (std::size_t p = 0; p < cfg.experiment.phases(); ++p) phases.push_back(harness::phase_env(cfg.experiment, p).to_json_doc());
  write_text(out / "phase_params.json", phases.dump(2) + "\n");

  const auto results = harness::run_training(cfg.experiment, cfg.workers, out);
  std::vector<harness::RunRows> rows;
  bool diverged = false;
  for (const auto& r : results) {
    rows.push_back(r.rows);
    if (r.diverged) {
      diverged = true;
      std::cerr << "run " << r.run.run_id << " diverged: " << r.error << "\n";
    }
  }
  const auto summary = harness::aggregate(rows, cfg.plot_bucket, cfg.experiment.phase_length());
  harness::write_summary_csv(out, summary);

  std::cout << "algorithm  phase  n  final-window return (mean +- se)\n";
  for (const auto& w : summary.phase_windows) {
    std::cout << std::left << std::setw(11) << w.algorithm << std::setw(7) << w.phase << std::setw(3) << w.stats.n
              << fixed(w.stats.mean) << " +- " << fixed(w.stats.stderr_mean()) << "\n";
  }
  std::cout << "wrote " << results.size() << " runs to " << out.string() << "\n";
  return diverged ? kExitDivergence : kExitOk;
}

int cmd_eval(const CommonOptions& opts, const std::string& checkpoint, const std::vector<std::string>& regime_names) {
  const cli::RunConfig cfg = opts.resolve();
  std::vector<harness::Regime> regimes;
  try {
    for (const auto& n : regime_names) regimes.push_back(harness::regime_from_string(n));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const bool explicit_regimes = !regimes.empty();
  if (!explicit_regimes) regimes = {harness::Regime::TrainFixed, harness::Regime::Random, harness::Regime::Extreme};

  const auto loaded = agents::load_agent(checkpoint);
  const auto& extra = loaded.extra;
  const nlohmann::json env_doc = extra.contains("final_env") && !extra["final_env"].is_null() ? extra["final_env"]
                                 : extra.contains("env")                                       ? extra["env"]
                                                                                               : nlohmann::json(nullptr);
  if (env_doc.is_null()) throw InvalidArgument("checkpoint has no environment record");
  const envs::EnvConfig train_env = envs::EnvConfig::from_json_doc(env_doc);

  std::vector<harness::GenEvalResult> results;
  nlohmann::json audit = nlohmann::json::object();
  for (auto regime : regimes) {
    harness::GenEvalConfig g;
    g.resample_count = cfg.eval.resample_count;
    g.episodes = cfg.eval.episodes;
    g.seed = cfg.seed;
    if (auto it = cfg.eval.regimes.find(regime); it != cfg.eval.regimes.end()) {
      g.spec = it->second;
    } else if (regime == harness::Regime::Extreme && train_env.kind == envs::EnvKind::NChain) {
      // The chain has no out-of-band default; only a configured one can be run.
      if (explicit_regimes) throw ConfigError("eval.regimes.extreme", "nchain has no default extreme regime; define one");
      std::cerr << "note: skipping extreme regime (not defined for nchain; set eval.regimes.extreme)\n";
      continue;
    }
    results.push_back(harness::run_generalization_eval(loaded.agent, train_env, regime, g));
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : results.back().params) list.push_back(p.params_json());
    audit[harness::to_string(regime)] = list;
  }
  const fs::path out = cfg.out;
  cli::write_resolved(cfg, out / "config.resolved.json");
  write_text(out / "eval.csv", harness::gen_eval_csv(results));
  write_text(out / "eval_summary.csv", harness::gen_eval_summary_csv(results));
  write_text(out / "params_audit.json", audit.dump(2) + "\n");

  std::cout << "regime       resamples  mean return   std\n";
  for (const auto& r : results) {
    std::cout << std::left << std::setw(13) << harness::to_string(r.regime) << std::setw(11) << r.resample_count
              << std::setw(14) << fixed(r.returns.mean) << fixed(r.returns.std) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts, const std::string& grid_flag) {
  cli::RunConfig cfg = opts.resolve();
  const std::string grid_text = grid_flag.empty() ? cfg.sweep.grid : grid_flag;
  std::vector<double> grid;
  try {
    grid = harness::parse_grid(grid_text);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  cfg.sweep.grid = grid_text;
  const fs::path out = cfg.out;
  cli::write_resolved(cfg, out / "config.resolved.json");
  const auto result = harness::refined_sweep(grid, harness::training_evaluator(cfg.experiment, cfg.sweep.algorithm, cfg.workers),
                                             cfg.sweep.refine_rounds);
  std::string csv = "coefficient,score\n";
  for (const auto& p : result.points) csv += format_double(p.coefficient) + "," + format_double(p.score) + "\n";
  write_text(out / "sweep.csv", csv);
  std::cout << agents::to_string(cfg.sweep.algorithm) << " best coefficient " << fixed(result.best, 4) << " (score "
            << fixed(result.best_score) << ")\n";
  return kExitOk;
}

int cmd_plot(const std::string& dir_text, std::uint64_t bucket, std::uint64_t phase_length) {
  const fs::path dir = dir_text;
  const fs::path metrics = fs::is_directory(dir / "metrics") ? dir / "metrics" : dir;
  const auto runs = harness::read_metric_dir(metrics);
  std::vector<harness::RunRows> nonempty;
  for (const auto& r : runs) {
    if (!r.empty()) nonempty.push_back(r);
  }
  if (nonempty.empty()) throw std::runtime_error("no metric rows under " + metrics.string());
  if (phase_length == 0) {
    // Infer from the resolved config when plotting a training directory.
    phase_length = 0;
    if (fs::exists(dir / "config.resolved.json")) {
      const auto cfg = cli::load_config(dir / "config.resolved.json");
      phase_length = cfg.experiment.phase_length();
      if (bucket == 0) bucket = cfg.plot_bucket;
    }
    if (phase_length == 0) {
      for (const auto& r : nonempty) phase_length = std::max<std::uint64_t>(phase_length, r.back().env_step);
    }
  }
  if (bucket == 0) bucket = 1000;
  const auto summary = harness::aggregate(nonempty, bucket, phase_length);
  harness::write_summary_csv(dir, summary);
  write_text(dir / "curves.svg", harness::render_curves_svg(summary.buckets));

  // Generalization summaries found one level down (e.g. eval/clac-r00/eval_summary.csv).
  std::vector<harness::BarGroup> groups;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().filename() != "eval_summary.csv") continue;
    std::ifstream is(e.path());
    std::string line;
    std::getline(is, line);
    harness::BarGroup g;
    g.label = e.path().parent_path().filename().string();
    while (std::getline(is, line)) {
      const auto c = harness::split_csv_line(line);
      if (c.size() != 4) continue;
      harness::MeanStd m;
      m.n = std::stoull(c[1]);
      m.mean = parse_double(c[2]);
      m.std = parse_double(c[3]);
      g.bars.emplace_back(c[0], m);
    }
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
  if (!groups.empty()) write_text(dir / "regimes.svg", harness::render_bars_svg(groups));
  std::cout << "plotted " << nonempty.size() << " runs to " << (dir / "curves.svg").string() << "\n";
  return kExitOk;
}

int cmd_dump_env(const CommonOptions& opts, const std::vector<std::string>& regime_names) {
  const cli::RunConfig cfg = opts.resolve();
  nlohmann::json out;
  nlohmann::json phases = nlohmann::json::array();
  for (std::size_t p = 0; p < cfg.experiment.phases(); ++p) phases.push_back(harness::phase_env(cfg.experiment, p).to_json_doc());
  out["phases"] = phases;
  const envs::EnvConfig nominal = harness::resolved_nominal(cfg.experiment);
  for (const auto& name : regime_names) {
    harness::Regime regime;
    try {
      regime = harness::regime_from_string(name);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto it = cfg.eval.regimes.find(regime);
    const auto spec = it != cfg.eval.regimes.end() ? it->second : harness::default_regime_spec(nominal, regime);
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.eval.resample_count; ++i) {
      const auto p = spec.empty() ? nominal
                                  : envs::resample(nominal, spec, derive_seed(cfg.seed, SeedStream::Resample, static_cast<std::uint64_t>(regime), i));
      list.push_back(p.params_json());
    }
    out["regimes"][name] = list;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claclab: capacity-limited actor-critic laboratory"};
  app.require_subcommand(1);

  CommonOptions train_opts, eval_opts, sweep_opts, dump_opts;
  auto* train = app.add_subcommand("train", "Train agents and write metrics, checkpoints and a resolved config");
  train_opts.attach(train, true);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint under parameter resampling");
  eval_opts.attach(eval);
  std::string checkpoint;
  std::vector<std::string> eval_regimes;
  eval->add_option("checkpoint", checkpoint, "Checkpoint directory")->required();
  eval->add_option("--regime", eval_regimes, "train-fixed, random or extreme (repeatable; default all)");

  auto* sweep = app.add_subcommand("sweep", "Coefficient sweep on the non-resampled task");
  sweep_opts.attach(sweep);
  std::string grid;
  sweep->add_option("--grid", grid, "lo:hi:step or a comma list");

  auto* plot = app.add_subcommand("plot", "Aggregate metric CSVs and render SVG plots");
  std::string plot_dir;
  std::uint64_t plot_bucket = 0, plot_phase = 0;
  plot->add_option("dir", plot_dir, "Training output or metric directory")->required();
  plot->add_option("--bucket", plot_bucket, "Env steps per curve point");
  plot->add_option("--phase-length", plot_phase, "Env steps per phase");

  auto* dump = app.add_subcommand("dump-env", "Print the environment parameters a config resolves to");
  dump_opts.attach(dump);
  std::vector<std::string> dump_regimes;
  dump->add_option("--regime", dump_regimes, "Also draw evaluation parameters for these regimes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_opts);
    if (*eval) return cmd_eval(eval_opts, checkpoint, eval_regimes);
    if (*sweep) return cmd_sweep(sweep_opts, grid);
    if (*plot) return cmd_plot(plot_dir, plot_bucket, plot_phase);
    if (*dump) return cmd_dump_env(dump_opts, dump_regimes);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TrainingDivergence& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
