#pragma once

#include <cstdint>
#include <vector>

#include "contres/engine.hpp"
#include "contres/rng.hpp"
#include "contres/schedule.hpp"
#include "contres/trace.hpp"

namespace contres {

// Independent trials are embarrassingly parallel: each trial runs from its own
// derived seed and writes only its own outcome slot, so the OpenMP farm is
// bit-identical to the serial reference regardless of thread count.

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint32_t trial) {
  return derive_seed(base_seed, trial);
}

struct FarmOptions {
  EnginePath path = EnginePath::Auto;
  Slot horizon_cap = kDefaultHorizonCap;
  bool keep_slot_records = false;
};

// OpenMP-parallel across trials.
std::vector<TrialOutcome> run_trials(const Protocol& proto, const ObliviousSchedule& sched,
                                     Slot horizon, int trials, std::uint64_t base_seed,
                                     const FarmOptions& opts = {});

// Serial reference; produces exactly the same outcomes as run_trials.
std::vector<TrialOutcome> run_trials_serial(const Protocol& proto, const ObliviousSchedule& sched,
                                            Slot horizon, int trials, std::uint64_t base_seed,
                                            const FarmOptions& opts = {});

}  // namespace contres
