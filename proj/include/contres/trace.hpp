#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contres/protocol.hpp"

namespace contres {

struct PartyRecord {
  std::uint32_t id = 0;
  Slot wake_slot = 0;                      // >= 0; first eligible at wake_slot + 1
  std::optional<Slot> success_slot = {};   // > wake_slot when present
  bool operator==(const PartyRecord&) const = default;
};

struct SlotRecord {
  Slot slot = 0;                                   // >= 1
  std::uint32_t wakeups = 0;                       // woken at slot-1, newly eligible here
  std::uint32_t transmitter_count = 0;
  std::optional<std::uint32_t> success_party = {}; // present iff transmitter_count == 1
  bool operator==(const SlotRecord&) const = default;
};

struct TraceMeta {
  std::uint64_t seed = 0;
  std::string rng;     // generator name, e.g. "splitmix64"
  std::string engine;  // "naive" or "cohort"
  std::string protocol;
  bool operator==(const TraceMeta&) const = default;
};

struct ExecutionTrace {
  std::vector<PartyRecord> parties;  // id order
  // Recorded up to the last slot simulated; the run stops early once no party
  // is active and no wake-up is pending. `horizon` keeps the requested value.
  std::vector<SlotRecord> slots;
  Slot horizon = 0;
  TraceMeta meta;
  // Per-slot transmitter ids, parallel to `slots`; filled only when
  // RunOptions::record_transmitter_ids is set (naive path).
  std::vector<std::vector<std::uint32_t>> transmitters;

  bool operator==(const ExecutionTrace&) const = default;
};

// Latency of one party: success_slot - wake_slot, or nullopt when censored.
// Throws std::out_of_range for an unknown id.
std::optional<Slot> latency_of(const ExecutionTrace& trace, std::uint32_t party);

// Per-trial simulation outcome kept by the trial farm. Slot records are
// retained only when the farm is asked to keep them.
struct TrialOutcome {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  Slot horizon = 0;
  std::vector<PartyRecord> parties;
  std::vector<SlotRecord> slots;
  bool operator==(const TrialOutcome&) const = default;
};

// CSV round trip: slots as "slot,wakeups,transmitters,success_party" and
// parties as "id,wake_slot,success_slot"; empty field = absent.
std::string trace_slots_csv(const ExecutionTrace& trace);
std::string trace_parties_csv(const ExecutionTrace& trace);
ExecutionTrace trace_from_csv(std::string_view slots_csv, std::string_view parties_csv,
                              Slot horizon = 0);

}  // namespace contres
