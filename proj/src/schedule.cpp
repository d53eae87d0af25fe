#include "contres/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "contres/analysis.hpp"
#include "contres/csv.hpp"
#include "contres/rng.hpp"

namespace contres {

namespace {
constexpr std::uint64_t kScheduleStream = 0xACED0515F00DULL;
}

void ObliviousSchedule::add(Slot slot, std::uint64_t count) {
  if (slot < 0) throw std::invalid_argument("wake slots are >= 0");
  if (count == 0) return;
  auto it = std::lower_bound(wakes.begin(), wakes.end(), slot,
                             [](const auto& e, Slot s) { return e.first < s; });
  if (it != wakes.end() && it->first == slot)
    it->second += count;
  else
    wakes.insert(it, {slot, count});
}

void ObliviousSchedule::merge(const ObliviousSchedule& other) {
  for (const auto& [slot, count] : other.wakes) add(slot, count);
}

std::uint64_t ObliviousSchedule::total_parties() const {
  std::uint64_t total = 0;
  for (const auto& [slot, count] : wakes) total += count;
  return total;
}

Slot ObliviousSchedule::last_wake_slot() const {
  return wakes.empty() ? -1 : wakes.back().first;
}

ObliviousSchedule synchronous(std::uint64_t n) {
  ObliviousSchedule s;
  s.add(0, n);
  return s;
}

ObliviousSchedule batch_per_slot(std::uint64_t rate, Slot duration) {
  if (rate == 0) throw std::invalid_argument("batch_per_slot: rate >= 1");
  if (duration < 1) throw std::invalid_argument("batch_per_slot: duration >= 1");
  ObliviousSchedule s;
  s.wakes.reserve(std::size_t(duration));
  for (Slot w = 0; w < duration; ++w) s.wakes.emplace_back(w, rate);
  return s;
}

ObliviousSchedule uniform_random(std::uint64_t count, Slot range_end, std::uint64_t seed) {
  if (count > 0 && range_end < 1)
    throw std::invalid_argument("uniform_random: range_end >= 1 when count > 0");
  SplitMix64 g(derive_seed(seed, kScheduleStream));
  std::map<Slot, std::uint64_t> acc;
  for (std::uint64_t i = 0; i < count; ++i) ++acc[Slot(g.next_below(std::uint64_t(range_end)))];
  ObliviousSchedule s;
  s.wakes.assign(acc.begin(), acc.end());
  return s;
}

ObliviousSchedule simple_adversary(std::uint64_t n, double eta) {
  if (n < 16) throw std::invalid_argument("simple_adversary: n >= 16 required");
  if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("simple_adversary: eta in (0, 1/2]");
  const double ln_n = std::log(double(n));
  const std::uint64_t rate = std::uint64_t(std::ceil(10.0 * ln_n / eta));
  const Slot duration = Slot(std::floor(double(n) / (ln_n * ln_n)));
  return batch_per_slot(rate, std::max<Slot>(duration, 1));
}

LayeredAdversaryReport layered_adversary(std::uint64_t n, const LocalRule& rule, double beta,
                                         double gamma, std::uint64_t seed, int max_resamples) {
  if (n < 16) throw std::invalid_argument("layered_adversary: n >= 16 required");
  if (!(beta >= 10.0)) throw std::invalid_argument("layered_adversary: beta >= 10 required");
  if (!(gamma > 0.0)) throw std::invalid_argument("layered_adversary: gamma > 0 required");
  if (max_resamples < 1) throw std::invalid_argument("layered_adversary: max_resamples >= 1");
  const double eta = rule.eta();
  if (!(eta > 0.0 && eta <= 0.5))
    throw std::invalid_argument("layered_adversary: rule eta must lie in (0, 1/2]");

  const double ln_n = std::log(double(n));
  const Slot t0 = Slot(std::floor(double(n) / (ln_n * ln_n)));
  // Filter from just above floor(sqrt(n)), so the filtered prefix sum at T0
  // equals s^low(T0) - s^low(floor(sqrt(n))) whenever that difference is >= 0.
  const Slot from = Slot(std::floor(std::sqrt(double(n)))) + 1;
  const FilterSpec low = FilterSpec::low_beta_from(beta, from);
  const double s_low = s_prefix(rule, t0, low);
  const double lnln_n = std::log(ln_n);
  const Slot t1 = Slot(std::floor(double(n) * s_low / (8.0 * gamma * lnln_n)));

  const ObliviousSchedule base = simple_adversary(n, eta);
  const double first_threshold = 10.0 * ln_n;
  const double second_threshold = gamma * lnln_n;

  LayeredAdversaryReport rep;
  rep.t0 = t0;
  rep.t1 = t1;

  for (int attempt = 1; attempt <= max_resamples; ++attempt) {
    ObliviousSchedule sched = base;
    if (t1 > t0) sched.merge(uniform_random(n / 3, t1, derive_seed(seed, std::uint64_t(attempt))));
    rep.resample_count = attempt;

    const Slot t_max = std::max(t0, t1);
    const ContentionSeries all = static_contention(sched, rule, FilterSpec::all(), t_max);
    bool ok = true;
    for (Slot t = 1; t <= t0 && ok; ++t)
      if (all.static_vals[std::size_t(t - 1)] < first_threshold) ok = false;
    if (ok && t1 > t0) {
      const ContentionSeries filtered = static_contention(sched, rule, low, t1);
      for (Slot t = t0; t <= t1 && ok; ++t)
        if (filtered.static_vals[std::size_t(t - 1)] < second_threshold) ok = false;
    }
    if (ok) {
      rep.schedule = std::move(sched);
      rep.verified = true;
      return rep;
    }
    // The degenerate construction has no random layer; resampling cannot help.
    if (t1 <= t0) break;
  }
  rep.verified = false;
  return rep;
}

ObliviousSchedule high_slot_blocker(const LocalRule& rule, Slot window_lo, Slot window_hi,
                                    std::uint64_t n, double beta) {
  if (window_lo < 1 || window_hi < window_lo)
    throw std::invalid_argument("high_slot_blocker: need 1 <= window_lo <= window_hi");
  if (n < 2) throw std::invalid_argument("high_slot_blocker: n >= 2 required");
  const double eta = rule.eta();
  if (!(eta > 0.0)) throw std::invalid_argument("high_slot_blocker: rule eta must be positive");
  const std::uint64_t rate = std::uint64_t(std::ceil(4.0 * std::log(double(n)) / eta));
  ObliviousSchedule s;
  for (Slot t = window_lo; t <= window_hi; ++t)
    if (rule.p(t) > b_beta(t, beta)) s.add(t - 1, rate);
  return s;
}

AdaptiveAdversary adaptive_wrap(std::function<std::uint64_t(const AdaptiveView&)> decide,
                                std::uint64_t budget) {
  if (!decide) throw std::invalid_argument("adaptive_wrap: decide callback required");
  return AdaptiveAdversary{std::move(decide), budget};
}

std::string schedule_to_csv(const ObliviousSchedule& sched) {
  std::string out = "slot,wake_count\n";
  for (const auto& [slot, count] : sched.wakes) {
    out += std::to_string(slot);
    out += ',';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

ObliviousSchedule schedule_from_csv(std::string_view text) {
  const auto lines = csv::split_lines(text);
  if (lines.empty() || lines[0] != "slot,wake_count")
    throw std::invalid_argument("schedule csv: missing 'slot,wake_count' header");
  ObliviousSchedule s;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv::split_fields(lines[i]);
    if (fields.size() != 2)
      throw std::invalid_argument("schedule csv: expected 2 fields per row");
    s.add(csv::parse_int(fields[0]), csv::parse_uint(fields[1]));
  }
  return s;
}

}  // namespace contres
