#pragma once

#include <cstdint>
#include <span>

#include "contres/protocol.hpp"
#include "contres/schedule.hpp"
#include "contres/trace.hpp"

namespace contres {

// Two interchangeable simulation paths:
//  - Naive: one Bernoulli draw per active party per slot, with each party's
//    coin sequence derived from (run seed, party id). Serial reference.
//  - Cohort: parties sharing a wake slot are exchangeable under a memoryless
//    rule, so the number of transmitters per cohort is drawn binomially and a
//    uniformly random member is credited on success. Distributionally
//    equivalent to Naive (tested), and much faster on large cohorts.
enum class EnginePath { Auto, Naive, Cohort };

inline constexpr Slot kDefaultHorizonCap = Slot(1) << 26;

struct RunOptions {
  EnginePath path = EnginePath::Auto;  // Auto: Cohort for oblivious, Naive for adaptive
  Slot horizon_cap = kDefaultHorizonCap;
  bool record_slots = true;
  bool record_transmitter_ids = false;  // naive path only
};

// Simulates slots 1..horizon: parties woken at slot t-1 or earlier each
// transmit independently with prob(t, t - wake); a slot succeeds iff exactly
// one party transmits, and the successful party stops transmitting forever.
ExecutionTrace run(const Protocol& proto, const ObliviousSchedule& sched, Slot horizon,
                   std::uint64_t seed, const RunOptions& opts = {});

// Adaptive variant: the adversary chooses each slot's wake count after seeing
// the full public history (never the current slot's coins). Naive path only.
ExecutionTrace run(const Protocol& proto, const AdaptiveAdversary& adversary, Slot horizon,
                   std::uint64_t seed, const RunOptions& opts = {});

// Exact Pr[exactly one transmitter] for independent Bernoulli(p_u) draws via
// the product-sum identity. Rejects lists longer than 25 entries.
double single_slot_success_prob(std::span<const double> probs);

}  // namespace contres
