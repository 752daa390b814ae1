#include <benchmark/benchmark.h>

#include "teflow/entropy.hpp"
#include "teflow/kdtree.hpp"
#include "teflow/random.hpp"
#include "teflow/synth.hpp"
#include "teflow/teflow.hpp"
#include "teflow/transfer_entropy.hpp"

namespace {

teflow::SampleMatrix uniform(std::size_t rows, std::size_t cols) {
  teflow::Rng rng(42);
  teflow::SampleMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform();
  return m;
}

void BM_KdTreeKnn(benchmark::State& state) {
  const auto m = uniform(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    teflow::ChebyshevKdTree tree(m);
    benchmark::DoNotOptimize(tree.kth_neighbor_distances(3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KdTreeKnn)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_CopulaEntropy(benchmark::State& state) {
  const auto m = uniform(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(teflow::copula_entropy(m));
}
BENCHMARK(BM_CopulaEntropy)->Args({1000, 2})->Args({1000, 3})->Args({5000, 3});

void BM_TransferEntropy(benchmark::State& state) {
  const auto series = teflow::synth::gen_coupled_var(
      {.samples = static_cast<std::size_t>(state.range(0)), .seed = 1});
  for (auto _ : state) benchmark::DoNotOptimize(teflow::transfer_entropy(series.x, series.y, 1));
}
BENCHMARK(BM_TransferEntropy)->Arg(180)->Arg(1000)->Arg(5000);

void BM_TeFlow(benchmark::State& state) {
  teflow::synth::CasScenarioSpec spec;
  spec.subsystems = 3;
  spec.segments = {{.driver = 0, .lag = 3, .windows = 5}, {.driver = 2, .lag = 8, .windows = 5}};
  spec.seed = 7;
  const auto plant = teflow::synth::gen_cas_scenario(spec).plant();
  teflow::TeFlowOptions opts;
  opts.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(teflow::te_flow(plant, opts));
}
BENCHMARK(BM_TeFlow)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
