#include "contres/trial_farm.hpp"

#include <stdexcept>

namespace contres {

namespace {

TrialOutcome run_one(const Protocol& proto, const ObliviousSchedule& sched, Slot horizon,
                     std::uint64_t base_seed, int trial, const FarmOptions& opts) {
  RunOptions ro;
  ro.path = opts.path;
  ro.horizon_cap = opts.horizon_cap;
  ro.record_slots = opts.keep_slot_records;
  ExecutionTrace trace = run(proto, sched, horizon, trial_seed(base_seed, trial), ro);
  TrialOutcome out;
  out.trial = trial;
  out.seed = trace.meta.seed;
  out.horizon = trace.horizon;
  out.parties = std::move(trace.parties);
  if (opts.keep_slot_records) out.slots = std::move(trace.slots);
  return out;
}

}  // namespace

std::vector<TrialOutcome> run_trials(const Protocol& proto, const ObliviousSchedule& sched,
                                     Slot horizon, int trials, std::uint64_t base_seed,
                                     const FarmOptions& opts) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials >= 1 required");
  // Validated here because an exception may not escape the parallel region.
  if (horizon < 1 || horizon > opts.horizon_cap)
    throw std::invalid_argument("run_trials: horizon out of range");
  std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < trials; ++i) out[std::size_t(i)] = run_one(proto, sched, horizon, base_seed, i, opts);
  return out;
}

std::vector<TrialOutcome> run_trials_serial(const Protocol& proto, const ObliviousSchedule& sched,
                                            Slot horizon, int trials, std::uint64_t base_seed,
                                            const FarmOptions& opts) {
  if (trials < 1) throw std::invalid_argument("run_trials_serial: trials >= 1 required");
  std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) out[std::size_t(i)] = run_one(proto, sched, horizon, base_seed, i, opts);
  return out;
}

}  // namespace contres
