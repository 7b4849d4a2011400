#include <benchmark/benchmark.h>

#include "hedgenet/network.hpp"
#include "hedgenet/prng.hpp"
#include "hedgenet/sampling.hpp"

using namespace hedgenet;

namespace {

struct Fixture {
  SpanParams params;
  Dataset dataset;
  std::vector<std::uint32_t> batch;

  Fixture(int d, int l, std::size_t batch_size) : params(d, l) {
    SplitMix64 rng(1);
    for (int i = 0; i < l; ++i)
      for (double& w : params.w_row(i)) w = rng.uniform(-1.0, 1.0);
    for (double& k : params.strikes()) k = 1.0;
    for (double& nu : params.nu()) nu = rng.uniform(-0.1, 0.1);
    for (int i = 0; i < l; ++i) params.eta()[i] = i % 2 ? -1.0 : 1.0;
    dataset = sample_uniform(make_box(d, 0.0, 2.0), batch_size, 2);
    dataset.targets.assign(batch_size, 0.3);
    for (std::uint32_t i = 0; i < batch_size; ++i) batch.push_back(i);
  }
};

void BM_forward(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1);
  const auto x = fx.dataset.point(0);
  const Restriction r = Restriction::unrestricted();
  for (auto _ : state) benchmark::DoNotOptimize(forward(fx.params, r, x));
}
BENCHMARK(BM_forward)->Args({2, 40})->Args({5, 78})->Args({20, 410});

void BM_loss_and_grad_batch(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1000);
  const Restriction r = Restriction::unrestricted();
  SpanParams grad(fx.params.dim(), fx.params.n_options());
  for (auto _ : state)
    benchmark::DoNotOptimize(
        loss_and_grad(fx.params, r, fx.dataset, fx.batch, {0.001, false}, grad));
}
BENCHMARK(BM_loss_and_grad_batch)->Args({2, 40})->Args({5, 78});

}  // namespace
