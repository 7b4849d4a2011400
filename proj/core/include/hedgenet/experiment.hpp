#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "hedgenet/lstsq.hpp"
#include "hedgenet/payoff.hpp"
#include "hedgenet/sampling.hpp"
#include "hedgenet/trainer.hpp"

namespace hedgenet {

/// Malformed or inconsistent experiment configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplingConfig {
  std::string mode = "uniform";  // uniform | grid
  Box box;
  std::size_t m = 10000;
  int points_per_dim = 0;  // grid mode
  std::uint64_t seed = 1;
};

struct StrategyConfig {
  std::string name = "unrestricted";  // unrestricted | single-asset | long-only |
                                      // predetermined | ls-svd
  WeightGridMode grid_mode = WeightGridMode::kRegularGrid;
  Box weight_box;  // defaults to [-1, 1]^d
  std::uint64_t grid_seed = 1;
};

struct GridExportConfig {
  int points_per_dim = 0;  // 0 = disabled
};

/// One config file = one experiment.
struct ExperimentConfig {
  std::string name = "experiment";
  PayoffSpec payoff;
  SamplingConfig sampling;
  StrategyConfig strategy;
  TrainConfig train;
  int runs = 1;
  int jobs = 1;
  GridExportConfig grid_export;

  void validate() const;  // throws ConfigError
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed_override;
};

Dataset build_dataset(const ExperimentConfig& cfg);

/// train: writes per-run report JSON + loss CSV + portfolio CSV (and an
/// ensemble summary when runs > 1). Returns a process exit code.
int cmd_train(const std::filesystem::path& config_path, const CommandOptions& opts);

/// compare: the four spanning strategies (single-asset, LS-GD, long-only,
/// unrestricted) on one payoff; writes <name>_compare.csv with one row per
/// strategy (strategy, mean MAE, ci95 half-width).
int cmd_compare(const std::filesystem::path& config_path, const CommandOptions& opts);

/// export-grid: trains one run and writes a contour-ready error grid.
int cmd_export_grid(const std::filesystem::path& config_path, const CommandOptions& opts);

}  // namespace hedgenet
