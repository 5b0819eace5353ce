#include <benchmark/benchmark.h>

#include "hyloc/crlb.hpp"
#include "hyloc/mm_solver.hpp"
#include "hyloc/simulate.hpp"

namespace {

using namespace hyloc;

Problem make_bench_problem(int n_anchors, std::uint64_t seed) {
  const RssParams params;
  const NetworkGeometry g = generate_network(n_anchors, 50.0, seed);
  const Sigmas sigmas = Sigmas::equal(n_anchors, 1.0);
  const TypeMask mask{true, true, true, true};
  const MeasurementSet ms = simulate_measurements(g, params, sigmas, mask, seed + 1);
  const WeightSet w = compute_weights(g, ms, params, WeightRanges::FromMeasurements);
  return make_problem(g.anchors, ms, w, params);
}

// One closed-form MM update; the per-iteration cost should scale linearly
// with the anchor count.
void BM_MmStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Problem prob = make_bench_problem(n, 7);
  Vec3 s{5.0, 5.0, 5.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s = assemble_update(prob, s));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_MmStep)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oN);

void BM_SolveTdra(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Problem prob = make_bench_problem(n, 11);
  SolverConfig cfg;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(prob, cfg));
  }
}
BENCHMARK(BM_SolveTdra)->Arg(8)->Arg(64);

void BM_HybridCrlb(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkGeometry g = generate_network(n, 50.0, 13);
  const Sigmas sigmas = Sigmas::equal(n, 1.0);
  const RssParams params;
  const TypeMask mask{true, true, true, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hybrid_crlb(mask, g, sigmas, params));
  }
}
BENCHMARK(BM_HybridCrlb)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
