#include <benchmark/benchmark.h>

#include "contres/engine.hpp"
#include "contres/trial_farm.hpp"

namespace {

using namespace contres;

void run_engine(benchmark::State& state, EnginePath path) {
  const std::uint64_t n = std::uint64_t(state.range(0));
  const Protocol proto = Protocol::exp_opt();
  const ObliviousSchedule sched = synchronous(n);
  const Slot horizon = Slot(64) * Slot(n);
  RunOptions opts;
  opts.path = path;
  opts.record_slots = false;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const ExecutionTrace tr = run(proto, sched, horizon, seed++, opts);
    benchmark::DoNotOptimize(tr.parties.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}

void BM_EngineNaive(benchmark::State& state) { run_engine(state, EnginePath::Naive); }
void BM_EngineCohort(benchmark::State& state) { run_engine(state, EnginePath::Cohort); }

BENCHMARK(BM_EngineNaive)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EngineCohort)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void run_farm(benchmark::State& state, bool parallel) {
  const std::uint64_t n = 256;
  const int trials = int(state.range(0));
  const Protocol proto = Protocol::exp_opt();
  const ObliviousSchedule sched = synchronous(n);
  const Slot horizon = Slot(64) * Slot(n);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const std::vector<TrialOutcome> out =
        parallel ? run_trials(proto, sched, horizon, trials, seed++)
                 : run_trials_serial(proto, sched, horizon, trials, seed++);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FarmSerial(benchmark::State& state) { run_farm(state, false); }
void BM_FarmParallel(benchmark::State& state) { run_farm(state, true); }

BENCHMARK(BM_FarmSerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FarmParallel)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
