#include "hedgenet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hedgenet/io.hpp"
#include "hedgenet/network.hpp"
#include "hedgenet/report.hpp"

namespace hedgenet {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

const json& require_field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) config_fail(where, "missing field '" + key + "'");
  return *it;
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    config_fail(where + "." + key, e.what());
  }
}

std::vector<double> bound_list(const json& j, int dim, const std::string& where) {
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(static_cast<std::size_t>(dim), j.get<double>());
  } else if (j.is_array()) {
    out = j.get<std::vector<double>>();
    if (static_cast<int>(out.size()) != dim)
      config_fail(where, "expected " + std::to_string(dim) + " entries");
  } else {
    config_fail(where, "expected number or array");
  }
  return out;
}

Box parse_box(const json& j, int dim, const std::string& where) {
  Box box;
  box.lo = bound_list(require_field(j, "lo", where), dim, where + ".lo");
  box.hi = bound_list(require_field(j, "hi", where), dim, where + ".hi");
  try {
    box.validate();
  } catch (const std::exception& e) {
    config_fail(where, e.what());
  }
  return box;
}

PayoffSpec parse_payoff(const json& j) {
  PayoffSpec spec;
  try {
    spec.kind = payoff_kind_from_string(require_field(j, "kind", "$.payoff").get<std::string>());
  } catch (const std::invalid_argument& e) {
    config_fail("$.payoff.kind", e.what());
  }
  spec.dim = get_or<int>(j, "dim", 1, "$.payoff");
  spec.strike = get_or<double>(j, "strike", 1.0, "$.payoff");
  spec.ah_variant = get_or<bool>(j, "ah_variant", false, "$.payoff");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    config_fail("$.payoff", e.what());
  }
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    payoff.validate();
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  if (sampling.mode != "uniform" && sampling.mode != "grid")
    throw ConfigError("config error at $.sampling.mode: expected 'uniform' or 'grid'");
  if (sampling.mode == "grid" && sampling.points_per_dim < 2)
    throw ConfigError("config error at $.sampling.points_per_dim: grid mode needs >= 2");
  if (sampling.box.dim() != payoff.dim)
    throw ConfigError("config error at $.sampling.box: dimension differs from payoff");
  if (runs < 1) throw ConfigError("config error at $.runs: must be >= 1");
  if (jobs < 1) throw ConfigError("config error at $.jobs: must be >= 1");
  const bool needs_grid = strategy.name == "predetermined" || strategy.name == "ls-svd";
  if (needs_grid && strategy.weight_box.dim() != payoff.dim)
    throw ConfigError("config error at $.strategy.weight_box: dimension differs from payoff");
  if (strategy.name != "unrestricted" && strategy.name != "single-asset" &&
      strategy.name != "long-only" && !needs_grid)
    throw ConfigError("config error at $.strategy.name: unknown strategy '" + strategy.name + "'");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config error in '" + path.string() + "': " + e.what());
  }

  ExperimentConfig cfg;
  cfg.name = get_or<std::string>(j, "name", path.stem().string(), "$");
  cfg.payoff = parse_payoff(require_field(j, "payoff", "$"));

  const json& sj = require_field(j, "sampling", "$");
  cfg.sampling.mode = get_or<std::string>(sj, "mode", "uniform", "$.sampling");
  cfg.sampling.box = parse_box(require_field(sj, "box", "$.sampling"), cfg.payoff.dim, "$.sampling.box");
  cfg.sampling.m = get_or<std::size_t>(sj, "m", 10000, "$.sampling");
  cfg.sampling.points_per_dim = get_or<int>(sj, "points_per_dim", 0, "$.sampling");
  cfg.sampling.seed = get_or<std::uint64_t>(sj, "seed", 1, "$.sampling");

  if (auto it = j.find("strategy"); it != j.end()) {
    cfg.strategy.name = get_or<std::string>(*it, "name", "unrestricted", "$.strategy");
    if (auto grid = it->find("grid"); grid != it->end()) {
      try {
        cfg.strategy.grid_mode = weight_grid_mode_from_string(grid->get<std::string>());
      } catch (const std::invalid_argument& e) {
        config_fail("$.strategy.grid", e.what());
      }
    }
    if (auto wb = it->find("weight_box"); wb != it->end())
      cfg.strategy.weight_box = parse_box(*wb, cfg.payoff.dim, "$.strategy.weight_box");
    cfg.strategy.grid_seed = get_or<std::uint64_t>(*it, "grid_seed", 1, "$.strategy");
  }
  if (cfg.strategy.weight_box.dim() == 0) cfg.strategy.weight_box = make_box(cfg.payoff.dim, -1.0, 1.0);

  if (auto it = j.find("train"); it != j.end()) {
    const json& tj = *it;
    cfg.train.n_options = get_or<int>(tj, "n_options", cfg.train.n_options, "$.train");
    cfg.train.n_batches = get_or<int>(tj, "n_batches", cfg.train.n_batches, "$.train");
    cfg.train.epochs = get_or<int>(tj, "epochs", cfg.train.epochs, "$.train");
    cfg.train.lr0 = get_or<double>(tj, "lr0", cfg.train.lr0, "$.train");
    cfg.train.lr_decay = get_or<double>(tj, "lr_decay", cfg.train.lr_decay, "$.train");
    cfg.train.lr_decay_every = get_or<int>(tj, "lr_decay_every", cfg.train.lr_decay_every, "$.train");
    cfg.train.weight_decay = get_or<double>(tj, "weight_decay", cfg.train.weight_decay, "$.train");
    if (auto reg = tj.find("regularization"); reg != tj.end()) {
      const auto kind = reg->get<std::string>();
      if (kind == "l2-squared") cfg.train.weight_decay_squared = true;
      else if (kind == "l2") cfg.train.weight_decay_squared = false;
      else config_fail("$.train.regularization", "expected 'l2-squared' or 'l2'");
    }
    cfg.train.adam_beta1 = get_or<double>(tj, "adam_beta1", cfg.train.adam_beta1, "$.train");
    cfg.train.adam_beta2 = get_or<double>(tj, "adam_beta2", cfg.train.adam_beta2, "$.train");
    cfg.train.adam_eps = get_or<double>(tj, "adam_eps", cfg.train.adam_eps, "$.train");
    cfg.train.seed = get_or<std::uint64_t>(tj, "seed", cfg.train.seed, "$.train");
    cfg.train.init.w_half_width =
        get_or<double>(tj, "init_w_half_width", cfg.train.init.w_half_width, "$.train");
    cfg.train.init.nu_half_width =
        get_or<double>(tj, "init_nu_half_width", cfg.train.init.nu_half_width, "$.train");
    cfg.train.init.strike_init =
        get_or<double>(tj, "init_strike", cfg.train.init.strike_init, "$.train");
    cfg.train.reshuffle_each_epoch =
        get_or<bool>(tj, "reshuffle_each_epoch", cfg.train.reshuffle_each_epoch, "$.train");
  }
  cfg.runs = get_or<int>(j, "runs", 1, "$");
  cfg.jobs = get_or<int>(j, "jobs", 1, "$");
  if (auto it = j.find("grid_export"); it != j.end())
    cfg.grid_export.points_per_dim = get_or<int>(*it, "points_per_dim", 0, "$.grid_export");

  cfg.validate();
  return cfg;
}

Dataset build_dataset(const ExperimentConfig& cfg) {
  Dataset ds = cfg.sampling.mode == "grid"
                   ? sample_grid(cfg.sampling.box, cfg.sampling.points_per_dim)
                   : sample_uniform(cfg.sampling.box, cfg.sampling.m, cfg.sampling.seed);
  fill_targets(ds, cfg.payoff);
  return ds;
}

namespace {

ExperimentConfig apply_options(const std::filesystem::path& config_path,
                               const CommandOptions& opts) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (opts.jobs) cfg.jobs = *opts.jobs;
  if (opts.seed_override) cfg.train.seed = *opts.seed_override;
  return cfg;
}

std::filesystem::path out_dir_for(const ExperimentConfig&, const CommandOptions& opts) {
  return opts.out_dir.value_or(std::filesystem::path("out"));
}

Restriction build_restriction(const ExperimentConfig& cfg) {
  if (cfg.strategy.name == "unrestricted") return Restriction::unrestricted();
  if (cfg.strategy.name == "single-asset") return Restriction::single_asset();
  if (cfg.strategy.name == "long-only") return Restriction::long_only();
  if (cfg.strategy.name == "predetermined") {
    auto weights = weight_grid(cfg.payoff.dim, cfg.train.n_options, cfg.strategy.grid_mode,
                               cfg.strategy.weight_box, cfg.strategy.grid_seed);
    return Restriction::predetermined(std::move(weights), cfg.payoff.dim);
  }
  throw ConfigError("strategy '" + cfg.strategy.name + "' is not trainable");
}

double common_strike(const PayoffSpec& spec) { return spec.strike > 0.0 ? spec.strike : 1.0; }

struct RunArtifacts {
  HedgeReport report;
  double mae_value = 0.0;
};

RunArtifacts write_run(const ExperimentConfig& cfg, const Dataset& ds,
                       const Restriction& restriction, const TrainResult& result, int run_index,
                       double wall_seconds, const std::filesystem::path& dir) {
  const std::string stem = cfg.name + "_run" + std::to_string(run_index);
  Predictor predictor = [&](std::span<const double> x) {
    return forward(result.params, restriction, x);
  };
  HedgeReport report;
  report.strategy = cfg.strategy.name;
  report.payoff = to_string(cfg.payoff.kind);
  report.d = cfg.payoff.dim;
  report.l = result.params.n_options();
  report.final_mse = mse(ds, predictor);
  report.final_mae = mae(ds, predictor);
  report.seed = cfg.train.seed + static_cast<std::uint64_t>(run_index);
  report.wall_seconds = wall_seconds;
  report.loss_history_csv = stem + "_loss.csv";
  report.params = result.params;
  report.portfolio = renormalize_strikes(result.params, restriction, common_strike(cfg.payoff));
  write_loss_history_csv(result.history, dir / (stem + "_loss.csv"));
  write_portfolio_csv(report.portfolio, cfg.payoff.dim, dir / (stem + "_portfolio.csv"));
  write_hedge_report(report, dir / (stem + "_report.json"));
  return {std::move(report), report.final_mae};
}

void write_summary(const ExperimentConfig& cfg, const std::vector<double>& maes,
                   const std::vector<double>& mses, const std::filesystem::path& dir) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["name"] = cfg.name;
  j["strategy"] = cfg.strategy.name;
  j["payoff"] = to_string(cfg.payoff.kind);
  j["runs"] = maes.size();
  auto block = [](const std::vector<double>& vals) {
    nlohmann::ordered_json b;
    b["values"] = vals;
    b["best"] = *std::min_element(vals.begin(), vals.end());
    if (vals.size() >= 2) {
      Ci95 ci = ci95(vals);
      b["mean"] = ci.mean;
      b["ci95_half_width"] = ci.half_width;
    } else {
      b["mean"] = vals.front();
      b["ci95_half_width"] = 0.0;
    }
    return b;
  };
  j["mae"] = block(maes);
  j["mse"] = block(mses);
  atomic_write(dir / (cfg.name + "_summary.json"), j.dump(2) + "\n");
}

int run_ls_svd(const ExperimentConfig& cfg, const Dataset& ds, const std::filesystem::path& dir) {
  std::vector<double> maes, mses;
  for (int r = 0; r < cfg.runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = cfg.strategy.grid_mode == WeightGridMode::kUniformRandom
                                   ? cfg.strategy.grid_seed + static_cast<std::uint64_t>(r)
                                   : cfg.strategy.grid_seed;
    auto weights = weight_grid(cfg.payoff.dim, cfg.train.n_options, cfg.strategy.grid_mode,
                               cfg.strategy.weight_box, seed);
    LsSolution sol = solve_ls(ds, weights);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Predictor predictor = [&](std::span<const double> x) { return sol.predict(x); };

    const std::string stem = cfg.name + "_run" + std::to_string(r);
    HedgeReport report;
    report.strategy = "ls-svd-" + to_string(cfg.strategy.grid_mode);
    report.payoff = to_string(cfg.payoff.kind);
    report.d = cfg.payoff.dim;
    report.l = cfg.train.n_options;
    report.final_mse = mse(ds, predictor);
    report.final_mae = mae(ds, predictor);
    report.seed = seed;
    report.wall_seconds = wall;
    report.diagnostics = sol.diag;
    report.portfolio.alpha = sol.alpha;
    report.portfolio.mu = sol.mu;
    report.portfolio.options.resize(sol.nu.size());
    for (std::size_t i = 0; i < sol.nu.size(); ++i) {
      auto& opt = report.portfolio.options[i];
      opt.nu_prime = sol.nu[i];
      opt.strike = 1.0;
      opt.w_prime.assign(weights.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(cfg.payoff.dim)),
                         weights.begin() + static_cast<std::ptrdiff_t>((i + 1) * static_cast<std::size_t>(cfg.payoff.dim)));
    }
    write_portfolio_csv(report.portfolio, cfg.payoff.dim, dir / (stem + "_portfolio.csv"));
    write_hedge_report(report, dir / (stem + "_report.json"));
    maes.push_back(report.final_mae);
    mses.push_back(report.final_mse);
  }
  if (cfg.runs > 1) write_summary(cfg, maes, mses, dir);
  std::cout << cfg.name << ": ls-svd mean MAE "
            << (maes.size() > 1 ? ci95(maes).mean : maes.front()) << "\n";
  return 0;
}

}  // namespace

int cmd_train(const std::filesystem::path& config_path, const CommandOptions& opts) {
  ExperimentConfig cfg = apply_options(config_path, opts);
  const auto dir = out_dir_for(cfg, opts);
  std::filesystem::create_directories(dir);
  Dataset ds = build_dataset(cfg);
  if (cfg.strategy.name == "ls-svd") return run_ls_svd(cfg, ds, dir);

  Restriction restriction = build_restriction(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  auto results = train_ensemble(cfg.payoff, ds, restriction, cfg.train, cfg.runs, cfg.jobs);
  const double wall_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<double> maes, mses;
  for (int r = 0; r < cfg.runs; ++r) {
    RunArtifacts art = write_run(cfg, ds, restriction, results[r], r,
                                 wall_total / cfg.runs, dir);
    maes.push_back(art.report.final_mae);
    mses.push_back(art.report.final_mse);
  }
  if (cfg.runs > 1) write_summary(cfg, maes, mses, dir);
  std::cout << cfg.name << ": best MAE " << *std::min_element(maes.begin(), maes.end())
            << " over " << cfg.runs << " run(s)\n";
  return 0;
}

int cmd_compare(const std::filesystem::path& config_path, const CommandOptions& opts) {
  ExperimentConfig cfg = apply_options(config_path, opts);
  const auto dir = out_dir_for(cfg, opts);
  std::filesystem::create_directories(dir);
  Dataset ds = build_dataset(cfg);

  const auto weights = weight_grid(cfg.payoff.dim, cfg.train.n_options, WeightGridMode::kRegularGrid,
                                   cfg.strategy.weight_box, cfg.strategy.grid_seed);
  struct Entry {
    std::string label;
    Restriction restriction;
  };
  std::vector<Entry> entries;
  entries.push_back({"single-asset", Restriction::single_asset()});
  entries.push_back({"ls-gd", Restriction::predetermined(weights, cfg.payoff.dim)});
  entries.push_back({"long-only", Restriction::long_only()});
  entries.push_back({"unrestricted", Restriction::unrestricted()});

  CsvTable table;
  table.header = {"strategy_index", "mean_mae", "ci95_half_width"};
  std::vector<std::string> labels;
  for (const auto& entry : entries) {
    auto results = train_ensemble(cfg.payoff, ds, entry.restriction, cfg.train, cfg.runs, cfg.jobs);
    std::vector<double> maes;
    for (const auto& result : results) {
      Predictor predictor = [&](std::span<const double> x) {
        return forward(result.params, entry.restriction, x);
      };
      maes.push_back(mae(ds, predictor));
    }
    double mean = maes.front(), half = 0.0;
    if (maes.size() >= 2) {
      Ci95 ci = ci95(maes);
      mean = ci.mean;
      half = ci.half_width;
    }
    labels.push_back(entry.label);
    table.rows.push_back({static_cast<double>(labels.size()), mean, half});
    std::cout << cfg.name << ": " << entry.label << " mean MAE " << mean << " +/- " << half
              << "\n";
  }
  // CSV cells are numeric; emit the strategy names alongside.
  std::string csv = "strategy,mean_mae,ci95_half_width\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    csv += labels[i] + "," + format_double(table.rows[i][1]) + "," + format_double(table.rows[i][2]) + "\n";
  atomic_write(dir / (cfg.name + "_compare.csv"), csv);
  return 0;
}

int cmd_export_grid(const std::filesystem::path& config_path, const CommandOptions& opts) {
  ExperimentConfig cfg = apply_options(config_path, opts);
  if (cfg.grid_export.points_per_dim < 2)
    throw ConfigError("config error at $.grid_export.points_per_dim: export needs >= 2");
  const auto dir = out_dir_for(cfg, opts);
  std::filesystem::create_directories(dir);
  Dataset ds = build_dataset(cfg);
  Restriction restriction = build_restriction(cfg);
  TrainResult result = train(cfg.payoff, ds, restriction, cfg.train);
  Dataset grid = sample_grid(cfg.sampling.box, cfg.grid_export.points_per_dim);
  fill_targets(grid, cfg.payoff);
  Predictor predictor = [&](std::span<const double> x) {
    return forward(result.params, restriction, x);
  };
  export_error_grid(cfg.payoff, predictor, grid, dir / (cfg.name + "_grid.csv"));
  std::cout << cfg.name << ": grid MAE " << mae(grid, predictor) << "\n";
  return 0;
}

}  // namespace hedgenet
