#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contres/protocol.hpp"
#include "contres/schedule.hpp"
#include "contres/trace.hpp"

namespace contres {

// ---------------------------------------------------------------------------
// Probability thresholds and slot filters. Natural logarithms throughout this
// group; block machinery below uses base-2 logarithms.
// ---------------------------------------------------------------------------

// b_beta(t) = 1 for t <= 16, else min(1, ln^beta(t) / t). Requires beta >= e.
double b_beta(Slot t, double beta);

// Indicator on local transmission times. LowBeta selects slots with
// p(i) <= b_beta(i); LowBetaFrom additionally requires i >= from.
struct FilterSpec {
  enum class Kind { All, LowBeta, LowBetaFrom, Custom };
  Kind kind = Kind::All;
  double beta = 0.0;
  Slot from = 1;
  std::function<bool(Slot)> custom;

  static FilterSpec all() { return {}; }
  static FilterSpec low_beta(double beta);
  static FilterSpec low_beta_from(double beta, Slot from);
  static FilterSpec custom_filter(std::function<bool(Slot)> fn);
};

bool filter_passes(const FilterSpec& filter, const LocalRule& rule, Slot i);
// p^I(i) = p(i) * I(i).
double filtered_prob(const FilterSpec& filter, const LocalRule& rule, Slot i);

// s^I(k) = sum_{i<=k} p^I(i). k >= 0 (0 -> 0).
double s_prefix(const LocalRule& rule, Slot k, const FilterSpec& filter = FilterSpec::all());

// Number of i <= k with p(i) > b_beta(i). Satisfies n_high <= s(k)/b_beta(k).
std::uint64_t n_high(const LocalRule& rule, Slot k, double beta);

// ---------------------------------------------------------------------------
// Contention over schedules and traces.
// ---------------------------------------------------------------------------

struct ContentionSeries {
  Slot t_begin = 1;                  // slot of index 0
  std::vector<double> static_vals;   // sigma_hat[t]: every woken party counts
  std::vector<double> dynamic_vals;  // sigma[t]: successful parties removed
};

// sigma_hat^I[t] for t = 1..t_max, from the schedule alone. Works for every
// kind (all rules are memoryless); LowBeta filters need a local-clock kind.
ContentionSeries static_contention(const ObliviousSchedule& sched, const Protocol& proto,
                                   const FilterSpec& filter, Slot t_max);
ContentionSeries static_contention(const ObliviousSchedule& sched, const LocalRule& rule,
                                   const FilterSpec& filter, Slot t_max);

// Static and dynamic contention recomputed from a trace. When survivors_as_of
// is set to t0, the active set at every t excludes only parties that succeeded
// at or before t0 (contention of the time-t0 survivor population); otherwise
// successes are removed as they happen. Filled for t = 1..(last recorded slot).
ContentionSeries dynamic_contention(const ExecutionTrace& trace, const Protocol& proto,
                                    const FilterSpec& filter,
                                    std::optional<Slot> survivors_as_of = {});

// tau(t) = sum over woken parties of 1 / (t - wake), ignoring successes.
double tau(const ObliviousSchedule& sched, Slot t);

// "slot,sigma_hat,sigma" (sigma column empty when dynamic values are absent).
std::string contention_to_csv(const ContentionSeries& series);

// ---------------------------------------------------------------------------
// Block classification (base-2 logarithms).
// ---------------------------------------------------------------------------

enum class BlockClass { Wakeup, Heavy, Light, Normal };

// lambda = ceil(2 log2 log2 n + log2(8c)); the block width is zeta(2*lambda+1)
// rounded up to a whole slot count. Requires n >= 16, c >= 1.
int block_lambda(std::uint64_t n, double c);
Slot block_width(std::uint64_t n, double c);
// Companion exponent with the 4c constant kept visible alongside the 8c one.
int light_block_exponent(std::uint64_t n, double c);

struct Block {
  int index = 0;
  Slot start = 0;
  BlockClass cls = BlockClass::Normal;
  double tau_at_start = 0.0;
};

struct BlockReport {
  Slot width = 0;
  int lambda = 0;
  double heavy_threshold = 0.0;  // 8c log2^2 n
  std::vector<Block> blocks;
};

// Partitions [window_lo, window_hi] into width-sized blocks: Wakeup if the
// block contains an arrival, else Heavy/Light/Normal by tau at block start
// against 8c log2^2 n and its reciprocal.
BlockReport classify_blocks(const ObliviousSchedule& sched, std::uint64_t n, double c,
                            Slot window_lo, Slot window_hi);

std::string blocks_to_csv(const BlockReport& report);
std::string block_class_name(BlockClass cls);

// ---------------------------------------------------------------------------
// Success-density profiles.
// ---------------------------------------------------------------------------

// Intervals I_0 = [1, t0) with target 0, and I_i = [t0+(i-1)delta, t0+i*delta)
// with target mu per slot, for every interval fully inside [1, horizon].
struct DensityProfile {
  Slot t0 = 1;
  double mu = 0.0;
  Slot delta = 1;
};

// goodness[i] == true iff interval I_i holds at most (target) * |I_i| successes.
std::vector<bool> density_goodness(const ExecutionTrace& trace, const DensityProfile& profile);

// ---------------------------------------------------------------------------
// Latency statistics.
// ---------------------------------------------------------------------------

struct LatencyStats {
  std::uint64_t parties = 0;
  std::uint64_t censored = 0;      // no success by the horizon
  double censored_fraction = 0.0;
  double mean = 0.0;               // censored parties enter at horizon + 1
  Slot max = 0;
  double q = 0.0;
  Slot q_quantile = 0;             // empirical (1-q)-quantile, the L(n, q) estimate
  bool reliable = false;           // censored_fraction < 1%
  bool all_censored = false;
};

LatencyStats latency_stats(std::span<const TrialOutcome> outcomes, double q);
LatencyStats latency_stats(std::span<const ExecutionTrace> traces, double q);

// ---------------------------------------------------------------------------
// Restricted-window experiment.
// ---------------------------------------------------------------------------

// 4^(-1/8): the survival level certified for the restricted window.
inline constexpr double kRestrictedWindowSurvival = 0.84089641525371454;

// Injects one tracked party at wake slot 0 on top of the adversary schedule
// and reports the fraction of trials in which it has no success in [1, T].
// T == 0 returns 1.0 without simulating. Requires trials >= 100.
double restricted_window_experiment(const Protocol& proto, const ObliviousSchedule& adversary,
                                    Slot T, int trials, std::uint64_t seed);

}  // namespace contres
