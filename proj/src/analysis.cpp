#include "contres/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contres/csv.hpp"
#include "contres/elias.hpp"
#include "contres/engine.hpp"
#include "contres/rng.hpp"

namespace contres {

double b_beta(Slot t, double beta) {
  if (t < 1) throw std::invalid_argument("b_beta: t >= 1 required");
  constexpr double kE = 2.718281828459045;
  if (!(beta >= kE)) throw std::invalid_argument("b_beta: beta >= e required");
  if (t <= 16) return 1.0;
  const double lt = std::log(double(t));
  return std::min(1.0, std::pow(lt, beta) / double(t));
}

FilterSpec FilterSpec::low_beta(double beta) {
  FilterSpec f;
  f.kind = Kind::LowBeta;
  f.beta = beta;
  return f;
}

FilterSpec FilterSpec::low_beta_from(double beta, Slot from) {
  FilterSpec f;
  f.kind = Kind::LowBetaFrom;
  f.beta = beta;
  f.from = from;
  return f;
}

FilterSpec FilterSpec::custom_filter(std::function<bool(Slot)> fn) {
  FilterSpec f;
  f.kind = Kind::Custom;
  f.custom = std::move(fn);
  return f;
}

bool filter_passes(const FilterSpec& filter, const LocalRule& rule, Slot i) {
  switch (filter.kind) {
    case FilterSpec::Kind::All:
      return true;
    case FilterSpec::Kind::LowBeta:
      return rule.p(i) <= b_beta(i, filter.beta);
    case FilterSpec::Kind::LowBetaFrom:
      return i >= filter.from && rule.p(i) <= b_beta(i, filter.beta);
    case FilterSpec::Kind::Custom:
      return filter.custom(i);
  }
  return true;
}

double filtered_prob(const FilterSpec& filter, const LocalRule& rule, Slot i) {
  return filter_passes(filter, rule, i) ? rule.p(i) : 0.0;
}

double s_prefix(const LocalRule& rule, Slot k, const FilterSpec& filter) {
  if (k < 0) throw std::invalid_argument("s_prefix: k >= 0 required");
  double sum = 0.0;
  for (Slot i = 1; i <= k; ++i) sum += filtered_prob(filter, rule, i);
  return sum;
}

std::uint64_t n_high(const LocalRule& rule, Slot k, double beta) {
  if (k < 0) throw std::invalid_argument("n_high: k >= 0 required");
  std::uint64_t count = 0;
  for (Slot i = 1; i <= k; ++i)
    if (rule.p(i) > b_beta(i, beta)) ++count;
  return count;
}

namespace {

// Filters keyed on the local probability need a local-clock rule; All/Custom
// filters work with any kind.
LocalRule rule_for_filter(const FilterSpec& filter, const Protocol& proto) {
  if (filter.kind == FilterSpec::Kind::LowBeta || filter.kind == FilterSpec::Kind::LowBetaFrom)
    return as_local_rule(proto);
  return LocalRule{[](Slot) { return 0.0; }, "unused"};
}

template <class ProbAt>  // double(t, t_loc)
ContentionSeries static_contention_impl(const ObliviousSchedule& sched, const LocalRule& rule,
                                        const FilterSpec& filter, Slot t_max, ProbAt prob_at) {
  if (t_max < 1) throw std::invalid_argument("static_contention: t_max >= 1 required");
  ContentionSeries out;
  out.static_vals.resize(std::size_t(t_max));
#pragma omp parallel for schedule(static)
  for (Slot t = 1; t <= t_max; ++t) {
    double sum = 0.0;
    for (const auto& [w, cnt] : sched.wakes) {
      if (w >= t) break;
      const Slot j = t - w;
      if (filter_passes(filter, rule, j)) sum += double(cnt) * prob_at(t, j);
    }
    out.static_vals[std::size_t(t - 1)] = sum;
  }
  return out;
}

}  // namespace

ContentionSeries static_contention(const ObliviousSchedule& sched, const Protocol& proto,
                                   const FilterSpec& filter, Slot t_max) {
  const LocalRule rule = rule_for_filter(filter, proto);
  return static_contention_impl(sched, rule, filter, t_max,
                                [&proto](Slot t, Slot j) { return proto.prob(t, j); });
}

ContentionSeries static_contention(const ObliviousSchedule& sched, const LocalRule& rule,
                                   const FilterSpec& filter, Slot t_max) {
  return static_contention_impl(sched, rule, filter, t_max,
                                [&rule](Slot, Slot j) { return rule.p(j); });
}

ContentionSeries dynamic_contention(const ExecutionTrace& trace, const Protocol& proto,
                                    const FilterSpec& filter,
                                    std::optional<Slot> survivors_as_of) {
  const Slot t_max = trace.slots.empty() ? trace.horizon : trace.slots.back().slot;
  if (t_max < 1) throw std::invalid_argument("dynamic_contention: empty trace");
  if (survivors_as_of && (*survivors_as_of < 0 || *survivors_as_of > trace.horizon))
    throw std::invalid_argument("dynamic_contention: t0 beyond horizon");
  const LocalRule rule = rule_for_filter(filter, proto);

  ContentionSeries out;
  out.static_vals.resize(std::size_t(t_max));
  out.dynamic_vals.resize(std::size_t(t_max));
#pragma omp parallel for schedule(static)
  for (Slot t = 1; t <= t_max; ++t) {
    double stat = 0.0, dyn = 0.0;
    for (const PartyRecord& p : trace.parties) {
      if (p.wake_slot >= t) continue;
      const Slot j = t - p.wake_slot;
      if (!filter_passes(filter, rule, j)) continue;
      const double pr = proto.prob(t, j);
      stat += pr;
      const Slot cutoff = survivors_as_of ? *survivors_as_of : t - 1;
      const bool removed = p.success_slot && *p.success_slot <= cutoff;
      if (!removed) dyn += pr;
    }
    out.static_vals[std::size_t(t - 1)] = stat;
    out.dynamic_vals[std::size_t(t - 1)] = dyn;
  }
  return out;
}

double tau(const ObliviousSchedule& sched, Slot t) {
  if (t < 1) throw std::invalid_argument("tau: t >= 1 required");
  double sum = 0.0;
  for (const auto& [w, cnt] : sched.wakes) {
    if (w >= t) break;
    sum += double(cnt) / double(t - w);
  }
  return sum;
}

std::string contention_to_csv(const ContentionSeries& series) {
  std::string out = "slot,sigma_hat,sigma\n";
  for (std::size_t i = 0; i < series.static_vals.size(); ++i) {
    out += std::to_string(series.t_begin + Slot(i));
    out += ',';
    out += csv::format_double(series.static_vals[i]);
    out += ',';
    if (i < series.dynamic_vals.size()) out += csv::format_double(series.dynamic_vals[i]);
    out += '\n';
  }
  return out;
}

int block_lambda(std::uint64_t n, double c) {
  if (n < 16) throw std::invalid_argument("block_lambda: n >= 16 required");
  if (!(c >= 1.0)) throw std::invalid_argument("block_lambda: c >= 1 required");
  return int(std::ceil(2.0 * std::log2(std::log2(double(n))) + std::log2(8.0 * c)));
}

int light_block_exponent(std::uint64_t n, double c) {
  if (n < 16) throw std::invalid_argument("light_block_exponent: n >= 16 required");
  if (!(c >= 1.0)) throw std::invalid_argument("light_block_exponent: c >= 1 required");
  return int(std::ceil(2.0 * std::log2(std::log2(double(n))) + std::log2(4.0 * c)));
}

Slot block_width(std::uint64_t n, double c) {
  const int lambda = block_lambda(n, c);
  return Slot(std::ceil(elias::zeta(2.0 * lambda + 1.0)));
}

BlockReport classify_blocks(const ObliviousSchedule& sched, std::uint64_t n, double c,
                            Slot window_lo, Slot window_hi) {
  if (window_lo < 1 || window_hi < window_lo)
    throw std::invalid_argument("classify_blocks: need 1 <= window_lo <= window_hi");
  BlockReport report;
  report.lambda = block_lambda(n, c);
  report.width = block_width(n, c);
  const double log2n = std::log2(double(n));
  report.heavy_threshold = 8.0 * c * log2n * log2n;

  std::size_t wake_idx = 0;
  int index = 0;
  for (Slot start = window_lo; start <= window_hi; start += report.width, ++index) {
    const Slot end = std::min(start + report.width - 1, window_hi);
    while (wake_idx < sched.wakes.size() && sched.wakes[wake_idx].first < start) ++wake_idx;
    const bool has_arrival =
        wake_idx < sched.wakes.size() && sched.wakes[wake_idx].first <= end;

    Block b;
    b.index = index;
    b.start = start;
    b.tau_at_start = tau(sched, start);
    if (has_arrival)
      b.cls = BlockClass::Wakeup;
    else if (b.tau_at_start > report.heavy_threshold)
      b.cls = BlockClass::Heavy;
    else if (b.tau_at_start < 1.0 / report.heavy_threshold)
      b.cls = BlockClass::Light;
    else
      b.cls = BlockClass::Normal;
    report.blocks.push_back(b);
  }
  return report;
}

std::string block_class_name(BlockClass cls) {
  switch (cls) {
    case BlockClass::Wakeup:
      return "wakeup";
    case BlockClass::Heavy:
      return "heavy";
    case BlockClass::Light:
      return "light";
    case BlockClass::Normal:
      return "normal";
  }
  return "?";
}

std::string blocks_to_csv(const BlockReport& report) {
  std::string out = "block_index,start,class,tau\n";
  for (const Block& b : report.blocks) {
    out += std::to_string(b.index);
    out += ',';
    out += std::to_string(b.start);
    out += ',';
    out += block_class_name(b.cls);
    out += ',';
    out += csv::format_double(b.tau_at_start);
    out += '\n';
  }
  return out;
}

std::vector<bool> density_goodness(const ExecutionTrace& trace, const DensityProfile& profile) {
  if (profile.t0 < 1 || profile.delta < 1)
    throw std::invalid_argument("density_goodness: t0 >= 1 and delta >= 1 required");
  if (!(profile.mu >= 0.0)) throw std::invalid_argument("density_goodness: mu >= 0 required");
  const Slot horizon = trace.horizon;

  std::vector<Slot> successes;
  for (const PartyRecord& p : trace.parties)
    if (p.success_slot) successes.push_back(*p.success_slot);
  std::sort(successes.begin(), successes.end());

  auto count_in = [&](Slot lo, Slot hi) {  // [lo, hi)
    const auto a = std::lower_bound(successes.begin(), successes.end(), lo);
    const auto b = std::lower_bound(successes.begin(), successes.end(), hi);
    return std::uint64_t(b - a);
  };

  std::vector<bool> good;
  if (profile.t0 - 1 > horizon) return good;  // I0 extends past the trace
  good.push_back(count_in(1, profile.t0) == 0);
  for (Slot i = 1;; ++i) {
    const Slot lo = profile.t0 + (i - 1) * profile.delta;
    const Slot hi = lo + profile.delta;
    if (hi - 1 > horizon) break;
    good.push_back(double(count_in(lo, hi)) <= profile.mu * double(profile.delta));
  }
  return good;
}

namespace {

LatencyStats latency_stats_pooled(std::vector<Slot>&& latencies, std::uint64_t censored,
                                  double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("latency_stats: q in (0, 1)");
  if (latencies.empty()) throw std::invalid_argument("latency_stats: no parties in pool");
  std::sort(latencies.begin(), latencies.end());
  LatencyStats st;
  st.parties = latencies.size();
  st.censored = censored;
  st.censored_fraction = double(censored) / double(st.parties);
  st.mean = std::accumulate(latencies.begin(), latencies.end(), 0.0) / double(st.parties);
  st.max = latencies.back();
  st.q = q;
  // The 1e-9 nudge keeps representable-q noise (e.g. q = 0.99) from bumping
  // the rank across an exact integer boundary.
  const std::size_t rank =
      std::size_t(std::clamp<double>(std::ceil((1.0 - q) * double(st.parties) - 1e-9), 1.0,
                                     double(st.parties)));
  st.q_quantile = latencies[rank - 1];
  st.reliable = st.censored_fraction < 0.01;
  st.all_censored = censored == st.parties;
  return st;
}

}  // namespace

LatencyStats latency_stats(std::span<const TrialOutcome> outcomes, double q) {
  std::vector<Slot> lat;
  std::uint64_t censored = 0;
  for (const TrialOutcome& o : outcomes)
    for (const PartyRecord& p : o.parties) {
      if (p.success_slot) {
        lat.push_back(*p.success_slot - p.wake_slot);
      } else {
        lat.push_back(o.horizon + 1);  // censored: flagged, never silently dropped
        ++censored;
      }
    }
  return latency_stats_pooled(std::move(lat), censored, q);
}

LatencyStats latency_stats(std::span<const ExecutionTrace> traces, double q) {
  std::vector<Slot> lat;
  std::uint64_t censored = 0;
  for (const ExecutionTrace& tr : traces)
    for (const PartyRecord& p : tr.parties) {
      if (p.success_slot) {
        lat.push_back(*p.success_slot - p.wake_slot);
      } else {
        lat.push_back(tr.horizon + 1);
        ++censored;
      }
    }
  return latency_stats_pooled(std::move(lat), censored, q);
}

double restricted_window_experiment(const Protocol& proto, const ObliviousSchedule& adversary,
                                    Slot T, int trials, std::uint64_t seed) {
  if (trials < 100)
    throw std::invalid_argument("restricted_window_experiment: trials >= 100 required");
  if (T < 0) throw std::invalid_argument("restricted_window_experiment: T >= 0 required");
  if (T == 0) return 1.0;

  // The tracked party u* is id 0: the first party woken at slot 0. Parties in
  // the same cohort are exchangeable, so any fixed slot-0 member stands in
  // for the injected one.
  ObliviousSchedule sched = adversary;
  sched.add(0, 1);

  RunOptions opts;
  opts.record_slots = false;
  std::int64_t survived = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : survived)
  for (int i = 0; i < trials; ++i) {
    const ExecutionTrace trace = run(proto, sched, T, derive_seed(seed, std::uint64_t(i)), opts);
    if (!trace.parties[0].success_slot) ++survived;
  }
  return double(survived) / double(trials);
}

}  // namespace contres
