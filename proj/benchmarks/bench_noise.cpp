#include <benchmark/benchmark.h>

#include "qgs/transport.hpp"
#include "test_util.hpp"

using namespace qgs;

static void BM_RingNoisePn(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0));
  const RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * test::kPi / 6.0);
  const Reservoir r{beta, 0.0, 0.0};
  QuadratureConfig quad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ring_noise_pn(ring, 0, r, Schrodinger{0.5}, quad));
  }
}
BENCHMARK(BM_RingNoisePn)->Arg(100)->Arg(10000);

static void BM_FullNoiseMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RingSpec ring = test::make_ring(n, 0.5, 1.0, 0.9);
  const std::vector<Reservoir> res(n, {50.0, 0.1, 0.0});
  QuadratureConfig quad;
  const SMatrixFn s = ring_evaluator(ring);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noise_matrix(s, n, res, Schrodinger{0.5}, quad));
  }
}
BENCHMARK(BM_FullNoiseMatrix)->Arg(2)->Arg(4);
