#include <benchmark/benchmark.h>

#include "tdpair/appendix.hpp"
#include "tdpair/tdsystem.hpp"
#include "tdpair/zigzag.hpp"

using namespace tdpair;

namespace {

ModuleTable table(std::size_t d) { return load_table(TDPAIR_BENCH_ASSET_DIR, d); }

void BM_RealizePrime(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const ModuleTable t = table(d);
  const PrimeField f;
  Sampler<PrimeField> s(f, 1);
  const auto ctx = random_admissible_context(d, s);
  for (auto _ : state) benchmark::DoNotOptimize(realize(t, ctx));
}
BENCHMARK(BM_RealizePrime)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_AppendixTrialPrime(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const ModuleTable t = table(d);
  const PrimeField f;
  std::size_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(appendix_trial(t, f, 3, trial++, true));
}
BENCHMARK(BM_AppendixTrialPrime)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_AppendixTrialRational(benchmark::State& state) {
  const ModuleTable t = table(static_cast<std::size_t>(state.range(0)));
  const RationalField f;
  std::size_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(appendix_trial(t, f, 3, trial++, true));
}
BENCHMARK(BM_AppendixTrialRational)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Irreducibility(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const PrimeField f;
  Sampler<PrimeField> s(f, 2);
  const auto real = realize(table(d), random_admissible_context(d, s));
  for (auto _ : state) benchmark::DoNotOptimize(irreducibility_check(f, real.a, real.astar));
}
BENCHMARK(BM_Irreducibility)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_EnumerateFeasible(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_feasible(d));
}
BENCHMARK(BM_EnumerateFeasible)->DenseRange(4, 10, 2);

void BM_FeasibleRank(benchmark::State& state) {
  const PrimeField f;
  Sampler<PrimeField> s(f, 4);
  const auto real = realize(table(5), random_admissible_context(5, s));
  for (auto _ : state) benchmark::DoNotOptimize(feasible_rank_test(real));
}
BENCHMARK(BM_FeasibleRank)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
