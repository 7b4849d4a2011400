#include <benchmark/benchmark.h>

#include <cmath>

#include "hedgenet/analytic.hpp"
#include "hedgenet/quadrature.hpp"
#include "hedgenet/weakform.hpp"

using namespace hedgenet;

namespace {

void BM_gk15_gaussian(benchmark::State& state) {
  auto f = [](double x) { return std::exp(-x * x); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, -40.0, 40.0, 1e-10));
}
BENCHMARK(BM_gk15_gaussian);

void BM_span_quadrature_d2(benchmark::State& state) {
  double x[2] = {1.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(span_quadrature_gaussian(2, x, 0.7));
}
BENCHMARK(BM_span_quadrature_d2);

void BM_cpv(benchmark::State& state) {
  const TestFunction1D phi = gaussian_fn(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cpv(phi, 1.0));
}
BENCHMARK(BM_cpv);

void BM_t2_action(benchmark::State& state) {
  const TestFunction1D a = gaussian_fn(1.0);
  const TestFunction1D b = gaussian_fn(2.0);
  QuadratureSpec q;
  q.abs_tol = 1e-7;
  for (auto _ : state) benchmark::DoNotOptimize(t2_action(a, b, q));
}
BENCHMARK(BM_t2_action);

}  // namespace

BENCHMARK_MAIN();
