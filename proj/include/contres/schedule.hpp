#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contres/protocol.hpp"
#include "contres/trace.hpp"

namespace contres {

// Oblivious wake-up schedule: how many parties wake at each slot. Wake slots
// are >= 0; a party woken at w first transmits at slot w + 1.
struct ObliviousSchedule {
  std::vector<std::pair<Slot, std::uint64_t>> wakes;  // slot ascending, count > 0

  void add(Slot slot, std::uint64_t count);
  void merge(const ObliviousSchedule& other);
  std::uint64_t total_parties() const;
  Slot last_wake_slot() const;  // -1 when empty

  bool operator==(const ObliviousSchedule&) const = default;
};

ObliviousSchedule synchronous(std::uint64_t n);
ObliviousSchedule batch_per_slot(std::uint64_t rate, Slot duration);  // slots [0, duration)
// `count` i.i.d. uniform wake slots in [0, range_end). Deterministic in seed.
ObliviousSchedule uniform_random(std::uint64_t count, Slot range_end, std::uint64_t seed);

// Wakes ceil(10 ln n / eta) parties per slot on [0, floor(n / ln^2 n)).
// Requires n >= 16 and eta in (0, 1/2].
ObliviousSchedule simple_adversary(std::uint64_t n, double eta);

struct LayeredAdversaryReport {
  ObliviousSchedule schedule;
  Slot t0 = 0;
  Slot t1 = 0;
  bool verified = false;
  int resample_count = 0;
};

// Simple layer on [0, T0) plus floor(n/3) uniform arrivals on [0, T1),
// resampled until two exact contention conditions hold: sigma_hat[t] >=
// 10 ln n on [1, T0], and the low-probability filtered contention >=
// gamma ln ln n on [T0, T1]. When the filtered prefix sum vanishes, T1 <= T0
// and the construction degenerates to the simple layer alone (the second
// window is empty). Requires n >= 16, beta >= 10, gamma > 0.
LayeredAdversaryReport layered_adversary(std::uint64_t n, const LocalRule& rule, double beta,
                                         double gamma, std::uint64_t seed, int max_resamples);

// For every slot t in [window_lo, window_hi] where rule.p(t) exceeds the
// low-probability threshold b_beta(t), wakes ceil(4 ln n / eta) parties at
// slot t - 1. Total parties = (number of high slots) * rate.
ObliviousSchedule high_slot_blocker(const LocalRule& rule, Slot window_lo, Slot window_hi,
                                    std::uint64_t n, double beta);

// Adaptive adversary: decide() is called once per wake slot w = 0, 1, ... with
// the fully simulated history (slots <= w, parties woken <= w) and returns how
// many parties wake at w; the engine clamps the reply to the remaining budget.
struct AdaptiveView {
  std::span<const SlotRecord> slots;
  std::span<const PartyRecord> parties;
  Slot wake_slot = 0;
  std::uint64_t remaining_budget = 0;
};

struct AdaptiveAdversary {
  std::function<std::uint64_t(const AdaptiveView&)> decide;
  std::uint64_t budget = 0;
};

AdaptiveAdversary adaptive_wrap(std::function<std::uint64_t(const AdaptiveView&)> decide,
                                std::uint64_t budget);

// CSV round trip, header "slot,wake_count".
std::string schedule_to_csv(const ObliviousSchedule& sched);
ObliviousSchedule schedule_from_csv(std::string_view csv);

}  // namespace contres
