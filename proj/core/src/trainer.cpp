#include "hedgenet/trainer.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hedgenet/prng.hpp"

namespace hedgenet {

void TrainConfig::validate() const {
  if (n_options < 1) throw std::invalid_argument("train config: n_options must be >= 1");
  if (n_batches < 1) throw std::invalid_argument("train config: n_batches must be >= 1");
  if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (!(lr0 > 0.0)) throw std::invalid_argument("train config: lr0 must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0))
    throw std::invalid_argument("train config: lr_decay must be in (0, 1]");
  if (lr_decay_every < 1) throw std::invalid_argument("train config: lr_decay_every must be >= 1");
  if (weight_decay < 0.0) throw std::invalid_argument("train config: weight_decay must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw std::invalid_argument("train config: betas must be in [0, 1)");
}

void adam_update(std::span<double> params, std::span<const double> grad, AdamState& state,
                 double lr) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_update: shape mismatch");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void adam_step(SpanParams& params, const SpanParams& grad, AdamState& state, double lr) {
  grad.require_finite("adam_step: gradient");
  adam_update(params.raw(), grad.raw(), state, lr);
  project_strikes(params);
  params.require_finite("adam_step: parameters");
}

SpanParams init_params(int dim, const Restriction& restriction, const TrainConfig& cfg) {
  SpanParams params(dim, cfg.n_options);
  SplitMix64 rng(cfg.seed);
  const bool predetermined = restriction.kind == RestrictionKind::kPredetermined;
  if (predetermined) {
    if (restriction.frozen_options(dim) != cfg.n_options)
      throw std::invalid_argument("init_params: frozen weights do not match n_options");
    // The W block leads the flat layout.
    std::copy(restriction.frozen_w.begin(), restriction.frozen_w.end(), params.raw().begin());
    std::copy(restriction.frozen_strikes.begin(), restriction.frozen_strikes.end(),
              params.strikes().begin());
    std::copy(restriction.frozen_eta.begin(), restriction.frozen_eta.end(),
              params.eta().begin());
  } else {
    for (int i = 0; i < cfg.n_options; ++i)
      for (double& w : params.w_row(i)) w = rng.uniform(-cfg.init.w_half_width, cfg.init.w_half_width);
    for (double& k : params.strikes()) k = cfg.init.strike_init;
    auto eta = params.eta();
    for (int i = 0; i < cfg.n_options; ++i) eta[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  for (double& n : params.nu()) n = rng.uniform(-cfg.init.nu_half_width, cfg.init.nu_half_width);
  params.alpha() = 0.0;
  return params;
}

TrainResult train(const PayoffSpec& spec, const Dataset& dataset, const Restriction& restriction,
                  const TrainConfig& cfg) {
  cfg.validate();
  spec.validate();
  if (spec.dim != dataset.dim) throw std::invalid_argument("train: payoff/dataset dimension mismatch");
  if (!dataset.targets_filled()) throw std::invalid_argument("train: dataset targets unfilled");
  const std::size_t m = dataset.size();
  if (static_cast<std::size_t>(cfg.n_batches) > m)
    throw std::invalid_argument("train: n_batches exceeds dataset size");

  TrainResult result;
  result.params = init_params(dataset.dim, restriction, cfg);
  auto batches = partition_batches(m, static_cast<std::size_t>(cfg.n_batches), cfg.seed);
  AdamState adam(result.params.size(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  SpanParams grad(dataset.dim, cfg.n_options);

  const Regularization reg{cfg.weight_decay, cfg.weight_decay_squared};
  double lr = cfg.lr0;
  result.history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.reshuffle_each_epoch && epoch > 1)
      batches = partition_batches(m, static_cast<std::size_t>(cfg.n_batches),
                                  cfg.seed + static_cast<std::uint64_t>(epoch));
    for (const auto& batch : batches) {
      loss_and_grad(result.params, restriction, dataset, batch, reg, grad);
      adam_step(result.params, grad, adam, lr);
    }
    result.history.push_back({epoch, full_loss(result.params, restriction, dataset, reg), lr});
    if (epoch % cfg.lr_decay_every == 0) lr *= cfg.lr_decay;
  }
  result.steps = adam.t;
  return result;
}

std::vector<TrainResult> train_ensemble(const PayoffSpec& spec, const Dataset& dataset,
                                        const Restriction& restriction, const TrainConfig& cfg,
                                        int runs, int n_jobs) {
  if (runs < 1) throw std::invalid_argument("train_ensemble: runs must be >= 1");
  std::vector<TrainResult> results(static_cast<std::size_t>(runs));
  auto run_one = [&](int r) {
    TrainConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
    results[r] = train(spec, dataset, restriction, run_cfg);
  };
  n_jobs = std::max(1, n_jobs);
  if (n_jobs == 1 || runs == 1) {
    for (int r = 0; r < runs; ++r) run_one(r);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(std::min(n_jobs, runs)));
  for (int w = 0; w < std::min(n_jobs, runs); ++w) {
    workers.emplace_back([&] {
      for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) run_one(r);
    });
  }
  for (auto& t : workers) t.join();
  return results;
}

}  // namespace hedgenet
