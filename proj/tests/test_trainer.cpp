#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <vector>

#include "hedgenet/report.hpp"
#include "hedgenet/trainer.hpp"

using namespace hedgenet;

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  SpanParams p(1, 1);
  p.nu()[0] = 0.3;
  p.strikes()[0] = 1.0;
  SpanParams g(1, 1);
  AdamState state(p.size(), 0.9, 0.999, 1e-8);
  SpanParams before = p;
  adam_step(p, g, state, 0.01);
  CHECK(state.t == 1);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.raw()[i] == before.raw()[i]);
}

TEST_CASE("adam: first step is about -lr * sign(g)") {
  std::vector<double> theta{0.0};
  std::vector<double> grad{1.0};
  AdamState state(1, 0.9, 0.999, 1e-8);
  adam_update(theta, grad, state, 0.01);
  CHECK(theta[0] == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("adam: converges on a convex scalar objective") {
  // f(theta) = (theta - 3)^2, gradient 2(theta - 3).
  std::vector<double> theta{0.0};
  AdamState state(1, 0.9, 0.999, 1e-8);
  for (int step = 0; step < 200; ++step) {
    std::vector<double> grad{2.0 * (theta[0] - 3.0)};
    adam_update(theta, grad, state, 0.1);
  }
  CHECK(std::abs(theta[0] - 3.0) <= 0.05);
}

TEST_CASE("adam: non-finite gradient rejected with the offending block") {
  SpanParams p(1, 1);
  SpanParams g(1, 1);
  g.mu()[0] = std::numeric_limits<double>::infinity();
  AdamState state(p.size(), 0.9, 0.999, 1e-8);
  CHECK_THROWS_WITH_AS(adam_step(p, g, state, 0.01), doctest::Contains("'mu'"),
                       std::runtime_error);
}

TEST_CASE("adam: strike projection applies after the update") {
  SpanParams p(1, 1);
  p.strikes()[0] = 1e-6;
  SpanParams g(1, 1);
  g.strikes()[0] = 5.0;  // pushes the strike negative without projection
  AdamState state(p.size(), 0.9, 0.999, 1e-8);
  adam_step(p, g, state, 0.01);
  CHECK(p.strikes()[0] == 1e-6);
}

namespace {

TrainConfig small_config(int l, std::uint64_t seed, int epochs = 1000) {
  TrainConfig cfg;
  cfg.n_options = l;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("training a zero target from zero init stays at zero") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = 1;
  spec.strike = 100.0;  // never in the money on the box
  Dataset ds = sample_uniform(make_box(1, 0.0, 2.0), 200, 3);
  fill_targets(ds, spec);
  TrainConfig cfg = small_config(2, 5, 50);
  cfg.init.nu_half_width = 0.0;
  cfg.init.w_half_width = 0.0;
  TrainResult res = train(spec, ds, Restriction::unrestricted(), cfg);
  // The fit is exact; only the decaying strike/selector entries keep the
  // penalty term slightly above zero.
  Predictor pred = [&](std::span<const double> x) {
    return forward(res.params, Restriction::unrestricted(), x);
  };
  CHECK(mse(ds, pred) == 0.0);
  for (double nu : res.params.nu()) CHECK(nu == 0.0);
  for (double mu : res.params.mu()) CHECK(mu == 0.0);
  CHECK(res.params.alpha() == 0.0);
  CHECK(res.history.back().loss <= 2e-3);
}

TEST_CASE("single ReLU target is recovered to MAE 1e-3") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;  // d=1: (x - 1)^+
  spec.dim = 1;
  spec.strike = 1.0;
  Dataset ds = sample_grid(make_box(1, 0.0, 2.0), 201);
  fill_targets(ds, spec);
  // Seed 23 draws w ~ 0.82, so the single unit starts alive on the box.
  TrainConfig cfg = small_config(1, 23);
  cfg.weight_decay = 0.0;
  TrainResult res = train(spec, ds, Restriction::unrestricted(), cfg);
  Predictor pred = [&](std::span<const double> x) {
    return forward(res.params, Restriction::unrestricted(), x);
  };
  CHECK(res.steps == 10000);
  CHECK(mae(ds, pred) <= 1e-3);
}

TEST_CASE("learning rate schedule: lr after epoch e is lr0 * decay^floor(e/300)") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kDispersionCall;
  spec.dim = 1;
  Dataset ds = sample_uniform(make_box(1, 0.0, 2.0), 40, 9);
  fill_targets(ds, spec);
  TrainConfig cfg = small_config(2, 1, 650);
  TrainResult res = train(spec, ds, Restriction::unrestricted(), cfg);
  for (const auto& rec : res.history) {
    const int decays = (rec.epoch - 1) / cfg.lr_decay_every;
    CHECK(rec.lr == doctest::Approx(cfg.lr0 * std::pow(cfg.lr_decay, decays)).epsilon(1e-14));
  }
  CHECK(res.history.back().lr == doctest::Approx(0.01 * 0.8 * 0.8).epsilon(1e-14));
  CHECK(res.steps == static_cast<long>(cfg.epochs) * cfg.n_batches);
}

TEST_CASE("training is deterministic given config and dataset") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kDispersionCall;
  spec.dim = 2;
  Dataset ds = sample_uniform(make_box(2, 0.0, 2.0), 300, 4);
  fill_targets(ds, spec);
  TrainConfig cfg = small_config(5, 33, 40);
  TrainResult a = train(spec, ds, Restriction::unrestricted(), cfg);
  TrainResult b = train(spec, ds, Restriction::unrestricted(), cfg);
  CHECK(std::equal(a.params.raw().begin(), a.params.raw().end(), b.params.raw().begin()));
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i)
    CHECK(a.history[i].loss == b.history[i].loss);
}

TEST_CASE("ensemble: seeds advance per run, parallel equals serial") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = 2;
  Dataset ds = sample_uniform(make_box(2, 0.0, 2.0), 300, 4);
  fill_targets(ds, spec);
  TrainConfig cfg = small_config(4, 100, 25);
  auto serial = train_ensemble(spec, ds, Restriction::unrestricted(), cfg, 3, 1);
  auto parallel = train_ensemble(spec, ds, Restriction::unrestricted(), cfg, 3, 2);
  REQUIRE(serial.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(std::equal(serial[r].params.raw().begin(),
                     serial[r].params.raw().end(),
                     parallel[r].params.raw().begin()));
    TrainConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
    TrainResult lone = train(spec, ds, Restriction::unrestricted(), run_cfg);
    CHECK(std::equal(lone.params.raw().begin(), lone.params.raw().end(),
                     serial[r].params.raw().begin()));
  }
  // Different seeds produce different parameters.
  CHECK_FALSE(std::equal(serial[0].params.raw().begin(), serial[0].params.raw().end(),
                         serial[1].params.raw().begin()));
}

TEST_CASE("predetermined ensembles keep the frozen instruments") {
  PayoffSpec spec;
  spec.kind = PayoffKind::kBestOfCall;
  spec.dim = 2;
  Dataset ds = sample_uniform(make_box(2, 0.0, 2.0), 200, 4);
  fill_targets(ds, spec);
  const std::vector<double> w{0.4, 0.6, 1.0, 0.2, 0.7, 0.7};
  Restriction r = Restriction::predetermined(w, 2);
  TrainConfig cfg = small_config(3, 50, 25);
  auto runs = train_ensemble(spec, ds, r, cfg, 2, 1);
  for (const auto& run : runs) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(run.params.w_row(i)[j] == w[static_cast<std::size_t>(i * 2 + j)]);
    for (double k : run.params.strikes()) CHECK(k == 1.0);
    for (double e : run.params.eta()) CHECK(e == 1.0);
  }
  // nu differs between runs (fresh draw per seed).
  CHECK(runs[0].params.nu()[0] != runs[1].params.nu()[0]);
}
