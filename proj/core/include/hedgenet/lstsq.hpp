#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hedgenet/network.hpp"
#include "hedgenet/sampling.hpp"
#include "hedgenet/trainer.hpp"

namespace hedgenet {

enum class WeightGridMode { kRegularGrid, kUniformRandom };

std::string to_string(WeightGridMode mode);
WeightGridMode weight_grid_mode_from_string(const std::string& name);

/// Basket-weight matrix (l x d, row-major) for predetermined spanning.
/// RegularGrid takes the l lexicographically-first nodes of the coarsest
/// tensor grid over the box with at least l nodes; UniformRandom draws l
/// i.i.d. uniform rows.
std::vector<double> weight_grid(int dim, int n_options, WeightGridMode mode, const Box& box,
                                std::uint64_t seed);

struct LsDiagnostics {
  double condition_number = 0.0;
  int rank = 0;
  int n_columns = 0;
  bool rank_deficient = false;
  double residual_mse = 0.0;
};

/// Affine-plus-basket-call regression coefficients: F(x) ~ alpha + mu.x +
/// sum_i nu_i (w^(i).x - 1)^+ with unit strikes and call selectors.
struct LsSolution {
  double alpha = 0.0;
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> weights;  // l*d copy of the design weights
  LsDiagnostics diag;

  double predict(std::span<const double> x) const;
};

/// Closed-form sample-covariance solution beta = Var(z)^-1 Cov(z, F(x)),
/// alpha = E[F] - beta.E[z], computed through the SVD pseudo-inverse of the
/// centered design with singular values below rcond * sigma_max truncated
/// (rcond = machine epsilon * max(m, d+l)).
LsSolution solve_ls(const Dataset& dataset, const std::vector<double>& weights);

/// Same normal-equation system solved directly without singular-value
/// truncation. Returns nullopt when elimination hits a vanishing pivot; on
/// ill-conditioned designs the returned coefficients are typically huge.
std::optional<LsSolution> solve_ls_normal_equations(const Dataset& dataset,
                                                    const std::vector<double>& weights);

/// Method (c): stochastic gradient descent on the predetermined design
/// (frozen weights, unit strikes, selectors frozen at +1).
TrainResult ls_gd(const Dataset& dataset, const std::vector<double>& weights,
                  const TrainConfig& cfg);

}  // namespace hedgenet
