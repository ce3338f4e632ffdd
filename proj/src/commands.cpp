#include "dilemma/commands.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dilemma/config_io.hpp"
#include "dilemma/export.hpp"
#include "dilemma/sim.hpp"

namespace fs = std::filesystem;

namespace dilemma {

namespace {

constexpr std::size_t kDefaultSeedCount = 14;

std::shared_ptr<spdlog::logger> logger() {
  static const auto log = [] {
    auto l = spdlog::stderr_color_mt("dilemma");
    l->set_pattern("[%H:%M:%S] [%^%l%$] %v");
    l->set_level(spdlog::level::info);
    if (const char* env = std::getenv("DILEMMA_LOG")) l->set_level(spdlog::level::from_str(env));
    return l;
  }();
  return log;
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const UsageError& e) {
    logger()->error("{}", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    logger()->error("{}", e.what());
    return kExitUsage;
  } catch (const ConstraintViolation& e) {
    logger()->error("invalid configuration: {}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    logger()->error("{}", e.what());
    return kExitRuntime;
  }
}

ExperimentConfig load_with_overrides(const fs::path& path, const Overrides& o) {
  ExperimentConfig cfg = load_config(path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.credit_mode) cfg.credit_mode = *o.credit_mode;
  if (o.matching_mode) cfg.matching_mode = *o.matching_mode;
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_networks(const fs::path& out_dir, const RunRecord& record) {
  for (const auto& cp : record.checkpoints) {
    const fs::path dir = out_dir / "checkpoints" / std::to_string(cp.episode);
    make_dirs(dir);
    const fs::path file = dir / "network.json";
    auto out = open_out(file);
    out << network_json(cp).dump(2) << '\n';
    close_checked(out, file);
  }
}

RunOptions progress_options(const ExperimentConfig& cfg, MetricsSink* sink) {
  RunOptions opts;
  opts.sink = sink;
  const auto seed = cfg.seed;
  const auto total = cfg.n_episodes;
  opts.on_episode = [seed, total](std::size_t ep) {
    if ((ep + 1) % 1000 == 0 || ep + 1 == total) logger()->debug("seed {}: episode {}/{}", seed, ep + 1, total);
  };
  return opts;
}

// Runs one experiment and writes metrics.csv, strategies.csv, the
// checkpoint networks and config.resolved.toml into out_dir.
RunRecord write_run(const ValidatedConfig& cfg, const fs::path& out_dir) {
  make_dirs(out_dir);
  {
    const fs::path file = out_dir / "config.resolved.toml";
    auto out = open_out(file);
    write_config(out, cfg.get());
    close_checked(out, file);
  }
  const fs::path metrics_file = out_dir / "metrics.csv";
  auto metrics = open_out(metrics_file);
  MetricsCsvWriter sink(metrics, cfg->n_agents);
  RunRecord record = run_experiment(cfg, progress_options(cfg.get(), &sink));
  close_checked(metrics, metrics_file);

  const fs::path strategies_file = out_dir / "strategies.csv";
  auto strategies = open_out(strategies_file);
  write_strategies_csv(strategies, record);
  close_checked(strategies, strategies_file);
  write_networks(out_dir, record);
  return record;
}

std::vector<std::uint64_t> default_seeds(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < kDefaultSeedCount; ++k) out.push_back(cfg.seed + k);
  return out;
}

void write_aggregate(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds, const fs::path& out_dir,
                     std::size_t parallelism) {
  validate_config(cfg);
  const auto records = run_seeds(cfg, default_seeds(cfg, seeds), out_dir, parallelism);
  const auto table = aggregate_runs(records);
  const fs::path file = out_dir / "aggregate.csv";
  auto out = open_out(file);
  write_aggregate_csv(out, table);
  close_checked(out, file);
  logger()->info("wrote {} ({} runs)", file.string(), records.size());
}

double parse_param_value(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<RunRecord> run_seeds(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                                 const fs::path& out_dir, std::size_t parallelism) {
  if (seeds.empty()) throw UsageError("at least one seed is required");
  std::vector<RunRecord> records(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t k = next++; k < seeds.size() && !failed; k = next++) {
      try {
        ExperimentConfig cfg = base;
        cfg.seed = seeds[k];
        records[k] = write_run(validate_config(cfg), out_dir / ("run_" + std::to_string(seeds[k])));
        logger()->info("seed {} finished", seeds[k]);
      } catch (...) {
        errors[k] = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(parallelism, seeds.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides) {
  return guarded([&] {
    const auto cfg = validate_config(load_with_overrides(config_path, overrides));
    write_run(cfg, out_dir);
    logger()->info("run finished: {}", out_dir.string());
  });
}

int cmd_aggregate(const fs::path& config_path, const std::vector<std::uint64_t>& seeds, const fs::path& out_dir,
                  std::size_t parallelism, const Overrides& overrides) {
  return guarded([&] { write_aggregate(load_with_overrides(config_path, overrides), seeds, out_dir, parallelism); });
}

int cmd_sweep(const fs::path& config_path, const std::string& param, const std::vector<std::string>& values,
              const std::vector<std::uint64_t>& seeds, const fs::path& out_dir, std::size_t parallelism,
              const Overrides& overrides) {
  return guarded([&] {
    if (param != "epsilon_dilemma" && param != "epsilon_selection") {
      throw UsageError("unknown sweep parameter '" + param + "' (valid: epsilon_dilemma, epsilon_selection)");
    }
    if (values.empty()) throw UsageError("sweep needs at least one value");
    const ExperimentConfig base = load_with_overrides(config_path, overrides);
    std::vector<std::pair<double, ExperimentConfig>> variants;
    for (const auto& s : values) {
      const double v = parse_param_value(s);
      ExperimentConfig cfg = base;
      (param == "epsilon_dilemma" ? cfg.epsilon_dilemma : cfg.epsilon_selection) = v;
      validate_config(cfg);
      variants.emplace_back(v, std::move(cfg));
    }
    for (const auto& [v, cfg] : variants) {
      write_aggregate(cfg, seeds, out_dir / "sweep" / (param + "=" + value_label(v)), parallelism);
    }
  });
}

int cmd_baseline(const fs::path& config_path, const std::string& mode, const std::vector<std::uint64_t>& seeds,
                 const fs::path& out_dir, std::size_t parallelism, const Overrides& overrides) {
  return guarded([&] {
    if (mode != "RandomMatching" && mode != "TwoPlayerFixed") {
      throw UsageError("unknown baseline mode '" + mode + "' (valid: RandomMatching, TwoPlayerFixed)");
    }
    Overrides o = overrides;
    o.matching_mode = parse_matching_mode(mode);
    write_aggregate(load_with_overrides(config_path, o), seeds, out_dir, parallelism);
  });
}

int cmd_export_network(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides) {
  return guarded([&] {
    const auto cfg = validate_config(load_with_overrides(config_path, overrides));
    const auto record = run_experiment(cfg, progress_options(cfg.get(), nullptr));
    write_networks(out_dir, record);
    logger()->info("wrote {} network checkpoints to {}", record.checkpoints.size(), out_dir.string());
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Partner-selection prisoner's dilemma simulator"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::string credit;
  std::string param;
  std::vector<std::string> values;
  std::string mode;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Flat TOML experiment config")->required();
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--credit-mode", credit, "Selection credit: ensuing-reward | zero");
  };
  auto multi_seed = [&](CLI::App* sub) {
    sub->add_option("--seeds", seeds, "Comma-separated seeds (default: 14 from the config seed)")->delimiter(',');
    sub->add_option("--parallelism", parallelism, "Concurrent runs");
  };

  auto* run = app.add_subcommand("run", "Single run");
  common(run);
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");

  auto* aggregate = app.add_subcommand("aggregate", "Multi-seed runs with mean/std aggregate");
  common(aggregate);
  multi_seed(aggregate);

  auto* sweep = app.add_subcommand("sweep", "Exploration-rate sweep");
  common(sweep);
  multi_seed(sweep);
  sweep->add_option("--param", param, "epsilon_dilemma | epsilon_selection")->required();
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',');

  auto* baseline = app.add_subcommand("baseline", "RandomMatching or TwoPlayerFixed aggregate");
  common(baseline);
  multi_seed(baseline);
  baseline->add_option("--mode", mode, "RandomMatching | TwoPlayerFixed")->required();

  auto* export_net = app.add_subcommand("export-network", "Write checkpoint interaction networks only");
  common(export_net);
  auto* export_seed_opt = export_net->add_option("--seed", seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Overrides overrides;
  if (!credit.empty()) {
    try {
      overrides.credit_mode = parse_credit_mode(credit);
    } catch (const Error& e) {
      logger()->error("{}", e.what());
      return kExitUsage;
    }
  }
  if (run->parsed()) {
    if (seed_opt->count() > 0) overrides.seed = seed;
    return cmd_run(config, out, overrides);
  }
  if (aggregate->parsed()) return cmd_aggregate(config, seeds, out, parallelism, overrides);
  if (sweep->parsed()) return cmd_sweep(config, param, values, seeds, out, parallelism, overrides);
  if (baseline->parsed()) return cmd_baseline(config, mode, seeds, out, parallelism, overrides);
  if (export_seed_opt->count() > 0) overrides.seed = seed;
  return cmd_export_network(config, out, overrides);
}

}  // namespace dilemma
