#include "hedgenet/lstsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hedgenet/linalg.hpp"
#include "hedgenet/prng.hpp"

namespace hedgenet {

std::string to_string(WeightGridMode mode) {
  return mode == WeightGridMode::kRegularGrid ? "regular" : "uniform";
}

WeightGridMode weight_grid_mode_from_string(const std::string& name) {
  if (name == "regular") return WeightGridMode::kRegularGrid;
  if (name == "uniform") return WeightGridMode::kUniformRandom;
  throw std::invalid_argument("unknown weight grid mode: '" + name + "'");
}

std::vector<double> weight_grid(int dim, int n_options, WeightGridMode mode, const Box& box,
                                std::uint64_t seed) {
  box.validate();
  if (box.dim() != dim) throw std::invalid_argument("weight_grid: box dimension mismatch");
  if (n_options < 1) throw std::invalid_argument("weight_grid: n_options must be >= 1");
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(n_options) * static_cast<std::size_t>(dim));
  if (mode == WeightGridMode::kUniformRandom) {
    SplitMix64 rng(seed);
    for (int i = 0; i < n_options; ++i)
      for (int j = 0; j < dim; ++j) weights.push_back(rng.uniform(box.lo[j], box.hi[j]));
    return weights;
  }
  // Coarsest tensor grid with at least n_options nodes.
  int q = 1;
  while (std::pow(static_cast<double>(q), dim) < static_cast<double>(n_options)) ++q;
  if (q == 1) {
    for (int j = 0; j < dim; ++j)
      weights.push_back(0.5 * (box.lo[j] + box.hi[j]));
    return weights;
  }
  std::vector<int> counter(static_cast<std::size_t>(dim), 0);
  for (int i = 0; i < n_options; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      const double t = static_cast<double>(counter[sj]) / static_cast<double>(q - 1);
      weights.push_back(box.lo[sj] + (box.hi[sj] - box.lo[sj]) * t);
    }
    for (int j = dim - 1; j >= 0; --j) {
      if (++counter[j] < q) break;
      counter[j] = 0;
    }
  }
  return weights;
}

namespace {

// z = [x_1..x_d, (w^(1).x - 1)^+, ..., (w^(l).x - 1)^+]
void design_row(std::span<const double> x, const std::vector<double>& weights, int dim,
                std::span<double> out) {
  for (int j = 0; j < dim; ++j) out[j] = x[j];
  const std::size_t l = weights.size() / static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < l; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += weights[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] * x[j];
    out[static_cast<std::size_t>(dim) + i] = std::max(s - 1.0, 0.0);
  }
}

struct CenteredDesign {
  std::size_t m = 0, n = 0;
  std::vector<double> a;       // m*n column-major, column means removed
  std::vector<double> y;       // centered target
  std::vector<double> col_mean;
  double y_mean = 0.0;
};

CenteredDesign build_centered(const Dataset& dataset, const std::vector<double>& weights) {
  if (!dataset.targets_filled()) throw std::invalid_argument("solve_ls: targets unfilled");
  const int d = dataset.dim;
  if (weights.empty() || weights.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("solve_ls: weight matrix shape mismatch");
  const std::size_t l = weights.size() / static_cast<std::size_t>(d);
  const std::size_t m = dataset.size();
  const std::size_t n = static_cast<std::size_t>(d) + l;

  CenteredDesign cd;
  cd.m = m;
  cd.n = n;
  cd.a.assign(m * n, 0.0);
  cd.col_mean.assign(n, 0.0);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < m; ++i) {
    design_row(dataset.point(i), weights, d, row);
    for (std::size_t j = 0; j < n; ++j) {
      cd.a[j * m + i] = row[j];
      cd.col_mean[j] += row[j];
    }
  }
  double max_abs = 0.0;
  for (double v : cd.a) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) throw std::invalid_argument("solve_ls: all-zero design");
  for (std::size_t j = 0; j < n; ++j) {
    cd.col_mean[j] /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) cd.a[j * m + i] -= cd.col_mean[j];
  }
  cd.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) cd.y_mean += dataset.targets[i];
  cd.y_mean /= static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) cd.y[i] = dataset.targets[i] - cd.y_mean;
  return cd;
}

LsSolution assemble_solution(const Dataset& dataset, const std::vector<double>& weights,
                             const CenteredDesign& cd, const std::vector<double>& beta) {
  const int d = dataset.dim;
  LsSolution sol;
  sol.mu.assign(beta.begin(), beta.begin() + d);
  sol.nu.assign(beta.begin() + d, beta.end());
  double offset = 0.0;
  for (std::size_t j = 0; j < cd.n; ++j) offset += beta[j] * cd.col_mean[j];
  sol.alpha = cd.y_mean - offset;
  sol.weights = weights;
  double ss = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double e = sol.predict(dataset.point(i)) - dataset.targets[i];
    ss += e * e;
  }
  sol.diag.residual_mse = ss / static_cast<double>(dataset.size());
  sol.diag.n_columns = static_cast<int>(cd.n);
  return sol;
}

}  // namespace

double LsSolution::predict(std::span<const double> x) const {
  const int d = static_cast<int>(mu.size());
  double y = alpha;
  for (int j = 0; j < d; ++j) y += mu[j] * x[j];
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += weights[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] * x[j];
    y += nu[i] * std::max(s - 1.0, 0.0);
  }
  return y;
}

LsSolution solve_ls(const Dataset& dataset, const std::vector<double>& weights) {
  CenteredDesign cd = build_centered(dataset, weights);
  SvdResult svd = svd_jacobi(std::move(cd.a), cd.m, cd.n);
  const double rcond =
      std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(cd.m, cd.n));
  int rank = 0;
  double cond = 0.0;
  std::vector<double> beta = svd_solve(svd, cd.y, rcond, &rank, &cond);
  LsSolution sol = assemble_solution(dataset, weights, cd, beta);
  sol.diag.condition_number = cond;
  sol.diag.rank = rank;
  sol.diag.rank_deficient =
      rank < static_cast<int>(cd.n) || dataset.size() <= cd.n;
  return sol;
}

std::optional<LsSolution> solve_ls_normal_equations(const Dataset& dataset,
                                                    const std::vector<double>& weights) {
  CenteredDesign cd = build_centered(dataset, weights);
  const std::size_t n = cd.n, m = cd.m;
  // Var(z) and Cov(z, F) from the centered design.
  std::vector<double> var(n * n, 0.0), cov(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += cd.a[p * m + i] * cd.a[q * m + i];
      acc /= static_cast<double>(m);
      var[p * n + q] = acc;
      var[q * n + p] = acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += cd.a[p * m + i] * cd.y[i];
    cov[p] = acc / static_cast<double>(m);
  }
  std::vector<double> beta;
  if (!solve_linear_system(std::move(var), std::move(cov), n, beta)) return std::nullopt;
  return assemble_solution(dataset, weights, cd, beta);
}

TrainResult ls_gd(const Dataset& dataset, const std::vector<double>& weights,
                  const TrainConfig& cfg) {
  const std::size_t l = weights.size() / static_cast<std::size_t>(dataset.dim);
  TrainConfig gd_cfg = cfg;
  gd_cfg.n_options = static_cast<int>(l);
  Restriction restriction = Restriction::predetermined(weights, dataset.dim);
  PayoffSpec target;  // targets are already in the dataset; train() checks the dimension
  target.dim = dataset.dim;
  return train(target, dataset, restriction, gd_cfg);
}

}  // namespace hedgenet
