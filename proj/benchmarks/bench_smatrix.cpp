#include <benchmark/benchmark.h>

#include "qgs/assembly.hpp"
#include "qgs/ring.hpp"
#include "test_util.hpp"

using namespace qgs;

static void BM_AssembledTotalS(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RingSpec ring = test::make_ring(n, 0.5, 1.0, 0.9);
  const GraphSpec g = ring_graph(ring);
  const ModeOrdering ord = canonical_ordering(g);
  double k = 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_s(g, ord, k).s);
    k += 1e-6;
  }
}
BENCHMARK(BM_AssembledTotalS)->Arg(3)->Arg(6)->Arg(12);

static void BM_CirculantTotalS(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RingSpec ring = test::make_ring(n, 0.5, 1.0, 0.9);
  double k = 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ring_total_s(ring, k).s);
    k += 1e-6;
  }
}
BENCHMARK(BM_CirculantTotalS)->Arg(3)->Arg(6)->Arg(12);
