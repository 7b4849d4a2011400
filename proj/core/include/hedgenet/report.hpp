#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "hedgenet/lstsq.hpp"
#include "hedgenet/network.hpp"
#include "hedgenet/payoff.hpp"
#include "hedgenet/sampling.hpp"
#include "hedgenet/trainer.hpp"

namespace hedgenet {

using Predictor = std::function<double(std::span<const double>)>;

double mae(const Dataset& dataset, const Predictor& predictor);
double mse(const Dataset& dataset, const Predictor& predictor);

struct Ci95 {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Normal-approximation 95% confidence interval: mean +/- 1.96 s / sqrt(n),
/// s the unbiased sample standard deviation. Requires n >= 2.
Ci95 ci95(std::span<const double> values);

/// Per-run hedge summary. Wall-clock time and the write timestamp are
/// reporting metadata, isolated from the deterministic payload when
/// serialized.
struct HedgeReport {
  std::string strategy;
  std::string payoff;
  int d = 0;
  int l = 0;
  double final_mse = 0.0;
  double final_mae = 0.0;
  std::string loss_history_csv;  // file reference, empty for closed-form fits
  Portfolio portfolio;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::optional<SpanParams> params;  // trained parameters, when applicable
  std::optional<LsDiagnostics> diagnostics;

  void validate() const;  // MAE >= 0 and MAE <= sqrt(MSE)
};

std::string hedge_report_to_json(const HedgeReport& report);
void write_hedge_report(const HedgeReport& report, const std::filesystem::path& path);

/// JSON form of the trainable parameter set, field names as in the type:
/// {"W": [[...]], "mu": [...], "strikes": [...], "alpha": a, "nu": [...],
///  "eta": [...]}.
std::string span_params_to_json(const SpanParams& params);
SpanParams span_params_from_json(const std::string& text);

void write_loss_history_csv(const std::vector<EpochRecord>& history,
                            const std::filesystem::path& path);

/// CSV i,nu_prime,w_prime_1..d,strike.
void write_portfolio_csv(const Portfolio& portfolio, int dim, const std::filesystem::path& path);

/// CSV x_1..x_d,target,prediction,abs_error over the given grid.
void export_error_grid(const PayoffSpec& spec, const Predictor& predictor, const Dataset& grid,
                       const std::filesystem::path& path);

}  // namespace hedgenet
