#include "hedgenet/report.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hedgenet/io.hpp"

namespace hedgenet {

double mae(const Dataset& dataset, const Predictor& predictor) {
  if (!dataset.targets_filled()) throw std::invalid_argument("mae: targets unfilled");
  const std::size_t m = dataset.size();
  if (m == 0) throw std::invalid_argument("mae: empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    acc += std::abs(predictor(dataset.point(i)) - dataset.targets[i]);
  return acc / static_cast<double>(m);
}

double mse(const Dataset& dataset, const Predictor& predictor) {
  if (!dataset.targets_filled()) throw std::invalid_argument("mse: targets unfilled");
  const std::size_t m = dataset.size();
  if (m == 0) throw std::invalid_argument("mse: empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = predictor(dataset.point(i)) - dataset.targets[i];
    acc += e * e;
  }
  return acc / static_cast<double>(m);
}

Ci95 ci95(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("ci95: need at least 2 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, 1.96 * sd / std::sqrt(static_cast<double>(n))};
}

void HedgeReport::validate() const {
  if (!(final_mae >= 0.0) || !(final_mse >= 0.0))
    throw std::runtime_error("hedge report: negative error metric");
  if (final_mae > std::sqrt(final_mse) * (1.0 + 1e-12) + 1e-15)
    throw std::runtime_error("hedge report: MAE exceeds sqrt(MSE)");
}

namespace {

nlohmann::ordered_json portfolio_to_json(const Portfolio& pf) {
  nlohmann::ordered_json j;
  j["alpha"] = pf.alpha;
  j["mu"] = pf.mu;
  auto& opts = j["options"] = nlohmann::ordered_json::array();
  for (const auto& opt : pf.options) {
    nlohmann::ordered_json o;
    o["nu_prime"] = opt.nu_prime;
    o["w_prime"] = opt.w_prime;
    o["strike"] = opt.strike;
    opts.push_back(std::move(o));
  }
  return j;
}

}  // namespace

std::string hedge_report_to_json(const HedgeReport& report) {
  report.validate();
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["strategy"] = report.strategy;
  j["payoff"] = report.payoff;
  j["d"] = report.d;
  j["l"] = report.l;
  j["final_mse"] = report.final_mse;
  j["final_mae"] = report.final_mae;
  j["seed"] = report.seed;
  j["loss_history_csv"] = report.loss_history_csv;
  j["portfolio"] = portfolio_to_json(report.portfolio);
  if (report.params) j["params"] = nlohmann::ordered_json::parse(span_params_to_json(*report.params));
  if (report.diagnostics) {
    nlohmann::ordered_json diag;
    if (std::isfinite(report.diagnostics->condition_number))
      diag["condition_number"] = report.diagnostics->condition_number;
    else
      diag["condition_number"] = "infinity";
    diag["rank"] = report.diagnostics->rank;
    diag["n_columns"] = report.diagnostics->n_columns;
    diag["rank_deficient"] = report.diagnostics->rank_deficient;
    diag["residual_mse"] = report.diagnostics->residual_mse;
    j["diagnostics"] = std::move(diag);
  }
  j["ci_construction"] = "normal approximation, mean +/- 1.96 s/sqrt(n)";
  // Non-deterministic fields live under "metadata" so reports stay
  // byte-identical across reruns once that object is dropped.
  nlohmann::ordered_json meta;
  meta["wall_seconds"] = report.wall_seconds;
  meta["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  j["metadata"] = std::move(meta);
  return j.dump(2) + "\n";
}

void write_hedge_report(const HedgeReport& report, const std::filesystem::path& path) {
  atomic_write(path, hedge_report_to_json(report));
}

std::string span_params_to_json(const SpanParams& params) {
  nlohmann::ordered_json j;
  auto& rows = j["W"] = nlohmann::ordered_json::array();
  for (int i = 0; i < params.n_options(); ++i) {
    auto row = params.w_row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["mu"] = std::vector<double>(params.mu().begin(), params.mu().end());
  j["strikes"] = std::vector<double>(params.strikes().begin(), params.strikes().end());
  j["alpha"] = params.alpha();
  j["nu"] = std::vector<double>(params.nu().begin(), params.nu().end());
  j["eta"] = std::vector<double>(params.eta().begin(), params.eta().end());
  return j.dump(2) + "\n";
}

SpanParams span_params_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto rows = j.at("W").get<std::vector<std::vector<double>>>();
  const auto mu = j.at("mu").get<std::vector<double>>();
  if (mu.empty()) throw std::invalid_argument("span params json: empty mu");
  const int d = static_cast<int>(mu.size());
  const int l = static_cast<int>(rows.size());
  SpanParams params(d, l);
  for (int i = 0; i < l; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != d)
      throw std::invalid_argument("span params json: ragged W");
    std::copy(rows[static_cast<std::size_t>(i)].begin(), rows[static_cast<std::size_t>(i)].end(),
              params.w_row(i).begin());
  }
  std::copy(mu.begin(), mu.end(), params.mu().begin());
  const auto strikes = j.at("strikes").get<std::vector<double>>();
  const auto nu = j.at("nu").get<std::vector<double>>();
  const auto eta = j.at("eta").get<std::vector<double>>();
  if (static_cast<int>(strikes.size()) != l || static_cast<int>(nu.size()) != l ||
      static_cast<int>(eta.size()) != l)
    throw std::invalid_argument("span params json: per-option vector length mismatch");
  std::copy(strikes.begin(), strikes.end(), params.strikes().begin());
  std::copy(nu.begin(), nu.end(), params.nu().begin());
  std::copy(eta.begin(), eta.end(), params.eta().begin());
  params.alpha() = j.at("alpha").get<double>();
  return params;
}

void write_loss_history_csv(const std::vector<EpochRecord>& history,
                            const std::filesystem::path& path) {
  CsvTable table;
  table.header = {"epoch", "loss", "lr"};
  table.rows.reserve(history.size());
  for (const auto& rec : history)
    table.rows.push_back({static_cast<double>(rec.epoch), rec.loss, rec.lr});
  atomic_write(path, csv_to_string(table));
}

void write_portfolio_csv(const Portfolio& portfolio, int dim, const std::filesystem::path& path) {
  CsvTable table;
  table.header = {"i", "nu_prime"};
  for (int j = 0; j < dim; ++j) table.header.push_back("w_prime_" + std::to_string(j + 1));
  table.header.push_back("strike");
  for (std::size_t i = 0; i < portfolio.options.size(); ++i) {
    const auto& opt = portfolio.options[i];
    std::vector<double> row = {static_cast<double>(i + 1), opt.nu_prime};
    row.insert(row.end(), opt.w_prime.begin(), opt.w_prime.end());
    row.push_back(opt.strike);
    table.rows.push_back(std::move(row));
  }
  atomic_write(path, csv_to_string(table));
}

void export_error_grid(const PayoffSpec& spec, const Predictor& predictor, const Dataset& grid,
                       const std::filesystem::path& path) {
  CsvTable table;
  for (int j = 0; j < grid.dim; ++j) table.header.push_back("x_" + std::to_string(j + 1));
  table.header.push_back("target");
  table.header.push_back("prediction");
  table.header.push_back("abs_error");
  const std::size_t m = grid.size();
  table.rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto x = grid.point(i);
    const double target = eval_payoff(spec, x);
    const double pred = predictor(x);
    std::vector<double> row(x.begin(), x.end());
    row.push_back(target);
    row.push_back(pred);
    row.push_back(std::abs(target - pred));
    table.rows.push_back(std::move(row));
  }
  atomic_write(path, csv_to_string(table));
}

}  // namespace hedgenet
