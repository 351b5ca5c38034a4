// Serial reference vs OpenMP paths. Thread count follows CDH_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "cdh/markov.hpp"
#include "cdh/verification.hpp"

namespace {

using cdh::Execution;

void BM_Ensemble(benchmark::State& state, Execution mode) {
  const auto pp = cdh::ProcessParams::real(1, 1, 2);
  const std::vector<double> times{-0.75, -0.5, 0.0, 1.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cdh::sample_ensemble(pp, times, n, 7, mode));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Verify(benchmark::State& state, const char* suite, Execution mode) {
  const auto grid = cdh::load_grid("default");
  cdh::VerifyOptions o;
  o.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(cdh::run_suite(suite, grid, o));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Ensemble, serial, Execution::Serial)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Ensemble, openmp, Execution::Parallel)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Verify, chapman_serial, "chapman", Execution::Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Verify, chapman_openmp, "chapman", Execution::Parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Verify, commutator_serial, "commutator", Execution::Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Verify, commutator_openmp, "commutator", Execution::Parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
