#include "contres/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "contres/rng.hpp"

namespace contres {

namespace {

// Stream index reserved for engine-internal draws (cohort binomials, winner
// selection). Party streams use the 32-bit party id, so they never collide.
constexpr std::uint64_t kEngineStream = 0xE71C0DE000000001ULL;

void check_run_args(Slot horizon, const RunOptions& opts) {
  if (horizon < 1) throw std::invalid_argument("run: horizon >= 1 required");
  if (horizon > opts.horizon_cap)
    throw std::invalid_argument("run: horizon exceeds the configured cap");
}

struct NaiveParty {
  Slot wake;
  SplitMix64 coins;
};

// Shared naive slot loop. `next_wake_count(w, view)` reports how many parties
// wake at slot w; oblivious runs read the schedule, adaptive runs consult the
// adversary with the history simulated so far.
template <class WakeSource>
ExecutionTrace run_naive_impl(const Protocol& proto, Slot horizon, std::uint64_t seed,
                              const RunOptions& opts, WakeSource&& wake_count_at,
                              std::uint64_t max_parties, bool more_wakes_possible_after_budget) {
  ExecutionTrace trace;
  trace.horizon = horizon;
  trace.meta = TraceMeta{seed, kRngName, "naive", proto.name()};

  std::vector<NaiveParty> parties;
  std::vector<std::uint32_t> active;
  std::uint64_t woken = 0;

  for (Slot t = 1; t <= horizon; ++t) {
    const std::uint64_t wake_now = wake_count_at(t - 1, trace);
    for (std::uint64_t i = 0; i < wake_now; ++i) {
      const auto id = std::uint32_t(parties.size());
      parties.push_back(NaiveParty{t - 1, SplitMix64(derive_seed(seed, id))});
      trace.parties.push_back(PartyRecord{id, t - 1, {}});
      active.push_back(id);
    }
    woken += wake_now;

    const bool more_wakes = woken < max_parties || more_wakes_possible_after_budget;
    if (active.empty() && !more_wakes) break;

    std::uint32_t transmitter_count = 0;
    std::uint32_t last_transmitter = 0;
    std::size_t last_index = 0;
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 0; i < active.size(); ++i) {
      NaiveParty& p = parties[active[i]];
      const double pr = proto.prob(t, t - p.wake);
      if (p.coins.next_double() < pr) {
        ++transmitter_count;
        last_transmitter = active[i];
        last_index = i;
        if (opts.record_transmitter_ids) ids.push_back(active[i]);
      }
    }

    SlotRecord rec{t, std::uint32_t(wake_now), transmitter_count, {}};
    if (transmitter_count == 1) {
      trace.parties[last_transmitter].success_slot = t;
      rec.success_party = last_transmitter;
      active[last_index] = active.back();
      active.pop_back();
    }
    if (opts.record_slots) {
      trace.slots.push_back(rec);
      if (opts.record_transmitter_ids) {
        std::sort(ids.begin(), ids.end());
        trace.transmitters.push_back(std::move(ids));
      }
    }
  }
  return trace;
}

struct Cohort {
  Slot wake;
  std::vector<std::uint32_t> members;  // still-active ids
};

ExecutionTrace run_cohort(const Protocol& proto, const ObliviousSchedule& sched, Slot horizon,
                          std::uint64_t seed, const RunOptions& opts) {
  ExecutionTrace trace;
  trace.horizon = horizon;
  trace.meta = TraceMeta{seed, kRngName, "cohort", proto.name()};

  SplitMix64 g(derive_seed(seed, kEngineStream));
  std::vector<Cohort> cohorts;
  std::size_t next_wake = 0;  // index into sched.wakes
  std::uint32_t next_id = 0;
  std::uint64_t active_count = 0;

  for (Slot t = 1; t <= horizon; ++t) {
    std::uint64_t wake_now = 0;
    if (next_wake < sched.wakes.size() && sched.wakes[next_wake].first == t - 1) {
      wake_now = sched.wakes[next_wake].second;
      Cohort c;
      c.wake = t - 1;
      c.members.resize(wake_now);
      for (auto& id : c.members) {
        id = next_id++;
        trace.parties.push_back(PartyRecord{id, t - 1, {}});
      }
      cohorts.push_back(std::move(c));
      active_count += wake_now;
      ++next_wake;
    }

    if (active_count == 0 && next_wake >= sched.wakes.size()) break;

    std::uint64_t transmitter_count = 0;
    Cohort* single = nullptr;
    for (Cohort& c : cohorts) {
      if (c.members.empty()) continue;
      const double pr = proto.prob(t, t - c.wake);
      const std::uint64_t k = sample_binomial(g, c.members.size(), pr);
      transmitter_count += k;
      if (k == 1) single = &c;
    }

    SlotRecord rec{t, std::uint32_t(wake_now), std::uint32_t(transmitter_count), {}};
    if (transmitter_count == 1) {
      // The lone transmitter is a uniformly random active member of its
      // cohort: within a cohort all active parties are exchangeable.
      const std::size_t pick = std::size_t(g.next_below(single->members.size()));
      const std::uint32_t id = single->members[pick];
      single->members[pick] = single->members.back();
      single->members.pop_back();
      trace.parties[id].success_slot = t;
      rec.success_party = id;
      --active_count;
      if (single->members.empty())
        std::erase_if(cohorts, [](const Cohort& c) { return c.members.empty(); });
    }
    if (opts.record_slots) trace.slots.push_back(rec);
  }
  return trace;
}

}  // namespace

ExecutionTrace run(const Protocol& proto, const ObliviousSchedule& sched, Slot horizon,
                   std::uint64_t seed, const RunOptions& opts) {
  check_run_args(horizon, opts);
  EnginePath path = opts.path;
  if (path == EnginePath::Auto)
    path = opts.record_transmitter_ids ? EnginePath::Naive : EnginePath::Cohort;

  if (path == EnginePath::Cohort) {
    if (opts.record_transmitter_ids)
      throw std::invalid_argument("run: transmitter ids are recorded by the naive path only");
    return run_cohort(proto, sched, horizon, seed, opts);
  }

  std::size_t next_wake = 0;
  const std::uint64_t total = sched.total_parties();
  auto wake_count_at = [&](Slot w, const ExecutionTrace&) -> std::uint64_t {
    if (next_wake < sched.wakes.size() && sched.wakes[next_wake].first == w)
      return sched.wakes[next_wake++].second;
    return 0;
  };
  // Parties scheduled at or beyond the horizon are never eligible; they are
  // excluded from the trace entirely.
  return run_naive_impl(proto, horizon, seed, opts, wake_count_at, total, false);
}

ExecutionTrace run(const Protocol& proto, const AdaptiveAdversary& adversary, Slot horizon,
                   std::uint64_t seed, const RunOptions& opts) {
  check_run_args(horizon, opts);
  if (opts.path == EnginePath::Cohort)
    throw std::invalid_argument("run: adaptive adversaries use the naive path");
  if (!adversary.decide) throw std::invalid_argument("run: adversary has no decide callback");

  std::uint64_t remaining = adversary.budget;
  auto wake_count_at = [&](Slot w, const ExecutionTrace& hist) -> std::uint64_t {
    if (remaining == 0) return 0;
    const AdaptiveView view{std::span(hist.slots), std::span(hist.parties), w, remaining};
    const std::uint64_t want = adversary.decide(view);
    const std::uint64_t granted = std::min(want, remaining);
    remaining -= granted;
    return granted;
  };
  return run_naive_impl(proto, horizon, seed, opts, wake_count_at, adversary.budget, false);
}

double single_slot_success_prob(std::span<const double> probs) {
  if (probs.size() > 25)
    throw std::invalid_argument("single_slot_success_prob: at most 25 parties");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("single_slot_success_prob: probabilities must lie in [0, 1]");
  double total = 0.0;
  for (std::size_t u = 0; u < probs.size(); ++u) {
    double term = probs[u];
    for (std::size_t v = 0; v < probs.size(); ++v)
      if (v != u) term *= 1.0 - probs[v];
    total += term;
  }
  return total;
}

}  // namespace contres
