#include "ellkurt/inference.hpp"
#include "ellkurt/models.hpp"
#include "ellkurt/ustat.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ellkurt;

DataMatrix normal_sample(std::size_t n, std::size_t p) {
  Rng rng(1);
  return sample_data(EllipticalSpec::toeplitz(ChiSquared{p}, 0.5), n, rng);
}

void BM_UStatsFast(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ustats_fast(x));
}
BENCHMARK(BM_UStatsFast)->Args({100, 100})->Args({100, 1600})->Args({400, 200})->Unit(benchmark::kMillisecond);

void BM_UStatsBruteForce(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(ustats_bruteforce(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UStatsBruteForce)->RangeMultiplier(2)->Range(8, 32)->Complexity([](benchmark::IterationCount n) { return static_cast<double>(n) * n * n * n; });

void BM_SampleData(benchmark::State& state) {
  const auto spec = EllipticalSpec::toeplitz(ExpChiProduct{static_cast<std::size_t>(state.range(0))}, 0.5);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_data(spec, 100, rng));
}
BENCHMARK(BM_SampleData)->Arg(100)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_PlugInCase2(benchmark::State& state) {
  const auto x = normal_sample(100, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(plugin_moments_case2(x, 1.0));
}
BENCHMARK(BM_PlugInCase2)->Arg(100)->Arg(1600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
