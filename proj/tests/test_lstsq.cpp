#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <vector>

#include "hedgenet/linalg.hpp"
#include "hedgenet/lstsq.hpp"
#include "hedgenet/prng.hpp"
#include "hedgenet/report.hpp"

using namespace hedgenet;

TEST_CASE("weight grids") {
  auto g1 = weight_grid(1, 3, WeightGridMode::kRegularGrid, make_box(1, -1.0, 1.0), 0);
  CHECK(g1 == std::vector<double>{-1.0, 0.0, 1.0});

  auto g2 = weight_grid(2, 4, WeightGridMode::kRegularGrid, make_box(2, -1.0, 1.0), 0);
  CHECK(g2 == std::vector<double>{-1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, 1.0});

  auto u1 = weight_grid(3, 7, WeightGridMode::kUniformRandom, make_box(3, -1.0, 1.0), 42);
  auto u2 = weight_grid(3, 7, WeightGridMode::kUniformRandom, make_box(3, -1.0, 1.0), 42);
  CHECK(u1 == u2);
  CHECK(u1.size() == 21);

  // Lexicographically-first nodes of the coarsest covering grid.
  auto g3 = weight_grid(2, 3, WeightGridMode::kRegularGrid, make_box(2, -1.0, 1.0), 0);
  CHECK(g3 == std::vector<double>{-1.0, -1.0, -1.0, 1.0, 1.0, -1.0});
}

TEST_CASE("svd reproduces a known factorization") {
  // A = [[3, 0], [0, 2]] has singular values {3, 2}.
  SvdResult svd = svd_jacobi({3.0, 0.0, 0.0, 2.0}, 2, 2);
  CHECK(svd.sigma[0] == doctest::Approx(3.0));
  CHECK(svd.sigma[1] == doctest::Approx(2.0));
  std::vector<double> rhs{3.0, 4.0};
  auto x = svd_solve(svd, rhs, 1e-12);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
}

namespace {

Dataset regression_dataset(int d, std::size_t m, std::uint64_t seed) {
  return sample_uniform(make_box(d, 0.0, 2.0), m, seed);
}

}  // namespace

TEST_CASE("solve_ls recovers an exactly representable payoff") {
  const int d = 2;
  Dataset ds = regression_dataset(d, 2000, 8);
  std::vector<double> weights{0.8, 0.5, 0.2, 1.1, -0.4, 0.9};
  ds.targets.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto x = ds.point(i);
    ds.targets[i] = std::max(0.8 * x[0] + 0.5 * x[1] - 1.0, 0.0);
  }
  LsSolution sol = solve_ls(ds, weights);
  CHECK(sol.nu[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(sol.nu[1]) <= 1e-8);
  CHECK(std::abs(sol.nu[2]) <= 1e-8);
  CHECK(std::abs(sol.alpha) <= 1e-8);
  CHECK(sol.diag.residual_mse <= 1e-10);
}

TEST_CASE("solve_ls on an affine target") {
  const int d = 2;
  Dataset ds = regression_dataset(d, 1500, 9);
  std::vector<double> weights{0.5, 0.5, 1.0, 0.0};
  ds.targets.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) ds.targets[i] = 2.0 + 3.0 * ds.point(i)[0];
  LsSolution sol = solve_ls(ds, weights);
  CHECK(sol.alpha == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.mu[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(sol.mu[1]) <= 1e-8);
  for (double nu : sol.nu) CHECK(std::abs(nu) <= 1e-7);
  CHECK(sol.diag.residual_mse <= 1e-10);
}

TEST_CASE("duplicated basket column stays finite and matches the deduplicated fit") {
  const int d = 2;
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = d;
  Dataset ds = regression_dataset(d, 2000, 10);
  fill_targets(ds, spec);
  std::vector<double> dup{0.9, 0.3, 0.9, 0.3, 0.1, 1.2};
  std::vector<double> dedup{0.9, 0.3, 0.1, 1.2};
  LsSolution a = solve_ls(ds, dup);
  LsSolution b = solve_ls(ds, dedup);
  for (double nu : a.nu) CHECK(std::isfinite(nu));
  CHECK(a.diag.residual_mse == doctest::Approx(b.diag.residual_mse).epsilon(1e-9));
  CHECK(a.diag.rank < a.diag.n_columns);
}

TEST_CASE("least-squares residual never increases when a column is added") {
  const int d = 2;
  PayoffSpec spec;
  spec.kind = PayoffKind::kDispersionCall;
  spec.dim = d;
  Dataset ds = regression_dataset(d, 1500, 12);
  fill_targets(ds, spec);
  std::vector<double> weights;
  double prev = std::numeric_limits<double>::infinity();
  SplitMix64 rng(64);
  for (int i = 0; i < 6; ++i) {
    weights.push_back(rng.uniform(-1.0, 1.0));
    weights.push_back(rng.uniform(-1.0, 1.0));
    LsSolution sol = solve_ls(ds, weights);
    CHECK(sol.diag.residual_mse <= prev * (1.0 + 1e-9) + 1e-12);
    prev = sol.diag.residual_mse;
  }
}

TEST_CASE("predictions invariant under column permutation") {
  const int d = 2;
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = d;
  Dataset ds = regression_dataset(d, 1000, 13);
  fill_targets(ds, spec);
  std::vector<double> w1{0.9, 0.1, 0.2, 0.8, 0.5, 0.5};
  std::vector<double> w2{0.5, 0.5, 0.9, 0.1, 0.2, 0.8};
  LsSolution a = solve_ls(ds, w1);
  LsSolution b = solve_ls(ds, w2);
  for (std::size_t i = 0; i < 50; ++i)
    CHECK(a.predict(ds.point(i)) == doctest::Approx(b.predict(ds.point(i))).epsilon(1e-8));
}

TEST_CASE("all-zero design rejected") {
  Dataset ds;
  ds.dim = 1;
  ds.points = {0.0, 0.0};
  ds.targets = {1.0, 2.0};
  std::vector<double> weights{0.5};
  CHECK_THROWS_AS(solve_ls(ds, weights), std::invalid_argument);
}

TEST_CASE("regular-grid pathology: normal equations explode, svd stays bounded") {
  // d=3 best-of call on the lexicographic regular grid {-1,0,1}^3: several
  // weight rows never activate on [0,2]^3, so Var(z) is singular.
  const int d = 3;
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = d;
  Dataset ds = regression_dataset(d, 4000, 14);
  fill_targets(ds, spec);
  auto weights = weight_grid(d, 27, WeightGridMode::kRegularGrid, make_box(d, -1.0, 1.0), 0);

  auto normal = solve_ls_normal_equations(ds, weights);
  bool exploded = !normal.has_value();
  if (normal) {
    double norm = std::abs(normal->alpha);
    for (double v : normal->mu) norm += std::abs(v);
    for (double v : normal->nu) norm += std::abs(v);
    exploded = norm >= 1e6 || !std::isfinite(norm);
  }
  CHECK(exploded);

  LsSolution svd_sol = solve_ls(ds, weights);
  double coef_norm_sq = svd_sol.alpha * svd_sol.alpha;
  for (double v : svd_sol.mu) coef_norm_sq += v * v;
  for (double v : svd_sol.nu) coef_norm_sq += v * v;
  CHECK(std::sqrt(coef_norm_sq) <= 1e3);
  CHECK(svd_sol.diag.rank_deficient);
  for (std::size_t i = 0; i < 100; ++i) CHECK(std::isfinite(svd_sol.predict(ds.point(i))));
}

TEST_CASE("ls_gd approaches the svd solution on a well-conditioned problem") {
  const int d = 2;
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = d;
  Dataset ds = regression_dataset(d, 2000, 15);
  fill_targets(ds, spec);
  auto weights = weight_grid(d, 5, WeightGridMode::kUniformRandom, make_box(d, 0.0, 1.0), 3);
  LsSolution svd_sol = solve_ls(ds, weights);

  TrainConfig cfg;
  cfg.n_options = 5;
  cfg.seed = 2;
  cfg.weight_decay = 0.0;
  TrainResult gd = ls_gd(ds, weights, cfg);

  double coef_mae = std::abs(gd.params.alpha() - svd_sol.alpha);
  int n_coef = 1;
  for (int j = 0; j < d; ++j, ++n_coef)
    coef_mae += std::abs(gd.params.mu()[j] - svd_sol.mu[j]);
  for (int i = 0; i < 5; ++i, ++n_coef)
    coef_mae += std::abs(gd.params.nu()[i] - svd_sol.nu[i]);
  CHECK(coef_mae / n_coef <= 1e-2);

  // Exact representability: target generated by one of the frozen baskets.
  Dataset exact = regression_dataset(d, 1200, 16);
  exact.targets.resize(exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) {
    auto x = exact.point(i);
    double s = weights[0] * x[0] + weights[1] * x[1];
    exact.targets[i] = 0.6 * std::max(s - 1.0, 0.0);
  }
  TrainResult gd2 = ls_gd(exact, weights, cfg);
  Predictor pred = [&](std::span<const double> x) {
    return forward(gd2.params, Restriction::predetermined(weights, d), x);
  };
  CHECK(mae(exact, pred) <= 1e-2);
}
