#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hedgenet/network.hpp"
#include "hedgenet/payoff.hpp"
#include "hedgenet/sampling.hpp"

namespace hedgenet {

/// Initialization of the trainable parameters: W ~ U[-w_half_width,
/// w_half_width], strikes at strike_init, nu ~ U[-nu_half_width,
/// nu_half_width], eta alternating +1/-1 (half calls, half puts), alpha and
/// mu at zero. Predetermined restrictions install their frozen instrument
/// definition instead of drawing W.
struct InitSpec {
  double w_half_width = 1.0;
  double nu_half_width = 0.1;
  double strike_init = 1.0;
};

struct TrainConfig {
  int n_options = 10;       // l
  int n_batches = 10;
  int epochs = 1000;        // E
  double lr0 = 0.01;
  double lr_decay = 0.8;
  int lr_decay_every = 300;  // epochs
  double weight_decay = 0.001;        // zeta
  bool weight_decay_squared = false;  // zeta ||theta|| (default) vs zeta ||theta||^2
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  InitSpec init;
  /// Redraw the batch partition at every epoch instead of iterating one
  /// fixed partition.
  bool reshuffle_each_epoch = false;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  AdamState(std::size_t n, double b1, double b2, double e)
      : m(n, 0.0), v(n, 0.0), beta1(b1), beta2(b2), eps(e) {}
};

/// One bias-corrected Adam update on a flat parameter vector.
void adam_update(std::span<double> params, std::span<const double> grad, AdamState& state,
                 double lr);

/// Adam step on a spanning network: validates the gradient is finite (error
/// names the offending block), updates, then projects strikes onto the floor.
void adam_step(SpanParams& params, const SpanParams& grad, AdamState& state, double lr);

struct EpochRecord {
  int epoch;
  double loss;  // full-dataset objective (MSE + weight decay term)
  double lr;
};

struct TrainResult {
  SpanParams params;
  std::vector<EpochRecord> history;
  long steps = 0;
};

SpanParams init_params(int dim, const Restriction& restriction, const TrainConfig& cfg);

/// Mini-batch Adam over a fixed batch partition: E epochs, learning rate
/// decayed by lr_decay after every lr_decay_every-th epoch, full-dataset
/// loss recorded once per epoch. Deterministic given (cfg, dataset).
TrainResult train(const PayoffSpec& spec, const Dataset& dataset, const Restriction& restriction,
                  const TrainConfig& cfg);

/// `runs` independent trainings with seeds cfg.seed + 0 .. runs-1. A
/// predetermined restriction keeps the same frozen instruments across runs;
/// the other kinds redraw W from each run's seed. Runs execute on up to
/// n_jobs threads; results are ordered by run index either way.
std::vector<TrainResult> train_ensemble(const PayoffSpec& spec, const Dataset& dataset,
                                        const Restriction& restriction, const TrainConfig& cfg,
                                        int runs, int n_jobs = 1);

}  // namespace hedgenet
