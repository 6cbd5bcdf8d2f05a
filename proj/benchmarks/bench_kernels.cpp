#include <benchmark/benchmark.h>

#include "circmc/engine.hpp"
#include "circmc/initial.hpp"
#include "circmc/logistic.hpp"
#include "circmc/schedules.hpp"

namespace {

using namespace circmc;

void BM_PhiloxUniform(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(uniform({1, 2, i++}));
}
BENCHMARK(BM_PhiloxUniform);

void BM_RandomGridNormal1d(benchmark::State& state) {
  const RandomGridMetropolis k(normal1d(), {.w = 0.5});
  ChainState s{{0.0}, {}};
  std::uint64_t t = 0;
  for (auto _ : state) k.apply(s, block_for(1, t++, 2));
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_RandomGridNormal1d);

void BM_RandomGridMvn9(benchmark::State& state) {
  const RandomGridMetropolis k(mvn9(), {.w = 0.03, .mode = UpdateMode::RandomComponent});
  ChainState s{mvn9_start_x(), {}};
  std::uint64_t t = 0;
  for (auto _ : state) k.apply(s, block_for(1, t++, 3));
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_RandomGridMvn9);

void BM_LangevinMvn9(benchmark::State& state) {
  const Langevin k(mvn9(), {.epsilon = 0.08});
  ChainState s{mvn9_start_x(), {}};
  std::uint64_t t = 0;
  for (auto _ : state) k.apply(s, block_for(1, t++, 10));
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_LangevinMvn9);

void BM_LogisticIteration(benchmark::State& state) {
  const auto posterior = std::make_shared<LogisticPosterior>(simulate_logistic_dataset(1));
  const auto k = make_logistic_iteration(posterior);
  ChainState s = draw_initial(LogisticPriorInit(), 1, 0);
  std::uint64_t t = 0;
  for (auto _ : state) k->apply(s, block_for(1, t++, static_cast<std::int64_t>(k->budget())));
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_LogisticIteration)->Unit(benchmark::kMillisecond);

void BM_CircularBasicNormal1d(benchmark::State& state) {
  const RandomGridMetropolis k(normal1d(), {.w = 0.5});
  const IsotropicNormalInit p0({0.0}, 5.0);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_circular_basic(k, p0, seed++, 1000));
}
BENCHMARK(BM_CircularBasicNormal1d)->Unit(benchmark::kMicrosecond);

void BM_ParallelNormal1d(benchmark::State& state) {
  const RandomGridMetropolis k(normal1d(), {.w = 0.5});
  const IsotropicNormalInit p0({0.0}, 5.0);
  ParallelOptions opt;
  opt.r = 10;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_parallel(k, p0, seed++, 1000, opt));
}
BENCHMARK(BM_ParallelNormal1d)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
