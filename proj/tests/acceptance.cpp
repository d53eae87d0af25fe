// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exit code is the number of failed criteria. Monte-Carlo
// criteria run from fixed seeds, so a verdict is reproducible bit for bit.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "contres/analysis.hpp"
#include "contres/counter_game.hpp"
#include "contres/elias.hpp"
#include "contres/engine.hpp"
#include "contres/experiment.hpp"
#include "contres/protocol.hpp"
#include "contres/rng.hpp"
#include "contres/schedule.hpp"
#include "contres/trace.hpp"
#include "contres/trial_farm.hpp"

namespace {

using namespace contres;

struct Failure {
  std::string msg;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw Failure{msg};
}

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Omega-code exactness: the listed codewords, a decode round trip for all
// N <= 1e5 (which alone rules out any codeword being a prefix of another,
// since the decoder would stop early), stability under appended bits, and a
// direct pairwise prefix scan on a small range.
// --------------------------------------------------------------------------
std::string criterion1() {
  const std::pair<std::uint64_t, const char*> table[] = {
      {1, "0"},         {2, "100"},     {3, "110"},
      {4, "101000"},    {8, "1110000"}, {16, "10100100000"},
  };
  for (const auto& [n, code] : table)
    require(elias::encode(n) == code, fmt("encode(%llu) != %s", (unsigned long long)n, code));
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    const std::string code = elias::encode(n);
    require((int)code.size() == elias::code_len(n), fmt("code_len mismatch at %llu", (unsigned long long)n));
    require(elias::decode_prefix(code) == n, fmt("decode round trip failed at %llu", (unsigned long long)n));
    if (n <= 10000)
      require(elias::decode_prefix(code + "1011") == n && elias::decode_prefix(code + "0001") == n,
              fmt("appended bits changed the decode at %llu", (unsigned long long)n));
  }
  std::vector<std::string> codes;
  for (std::uint64_t n = 1; n <= 512; ++n) codes.push_back(elias::encode(n));
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = 0; j < codes.size(); ++j)
      if (i != j)
        require(codes[j].compare(0, codes[i].size(), codes[i]) != 0,
                fmt("code of %zu is a prefix of code of %zu", i + 1, j + 1));
  return "codes 1..16 exact, round trip + prefix-freeness for N <= 1e5";
}

// --------------------------------------------------------------------------
// 2. Clock-synchronization coverage: every window of width 2^code_len(k)
// contains slots decoding to each a-value in {1..k}, and every window of
// width 2^code_len(2k+1) covers every shifted value in {-k..k}.
// --------------------------------------------------------------------------
std::string criterion2() {
  SplitMix64 rng(0xC0FFEE01);
  const std::uint64_t start_range = std::uint64_t(1) << 40;
  for (int k = 1; k <= 64; ++k) {
    const std::uint64_t width_a = std::uint64_t(1) << elias::code_len(k);
    const std::uint64_t width_p = std::uint64_t(1) << elias::code_len(2 * k + 1);
    for (int rep = 0; rep < 100; ++rep) {
      const std::uint64_t lo_a = 1 + rng.next_below(start_range);
      std::vector<char> seen(k + 1, 0);
      for (std::uint64_t t = lo_a; t < lo_a + width_a; ++t) {
        const std::uint64_t a = elias::a_of(t);
        if (a <= (std::uint64_t)k) seen[a] = 1;
      }
      for (int j = 1; j <= k; ++j)
        require(seen[j], fmt("a-value %d missing in [%llu, +%llu)", j, (unsigned long long)lo_a,
                             (unsigned long long)width_a));
      const std::uint64_t lo_p = 1 + rng.next_below(start_range);
      std::vector<char> seen_p(2 * k + 1, 0);
      for (std::uint64_t t = lo_p; t < lo_p + width_p; ++t) {
        const std::int64_t ap = elias::a_prime_of(t);
        if (ap >= -k && ap <= k) seen_p[ap + k] = 1;
      }
      for (int m = -k; m <= k; ++m)
        require(seen_p[m + k], fmt("a'-value %d missing in [%llu, +%llu)", m,
                                   (unsigned long long)lo_p, (unsigned long long)width_p));
    }
  }
  return "a covers {1..k}, a' covers {-k..k} in 100 random windows for every k <= 64";
}

// --------------------------------------------------------------------------
// 3. Success-probability sandwich, checked against exhaustive enumeration
// with zero tolerance: P[exactly one] in [sigma 4^-sigma, sigma e^{1-sigma}]
// and P[at most one] <= e^-sigma + sigma e^{1-sigma}.
// --------------------------------------------------------------------------
std::string criterion3() {
  SplitMix64 rng(0x5A11DBEE);
  for (int rep = 0; rep < 1000; ++rep) {
    const int len = 1 + (int)rng.next_below(12);
    std::vector<double> p(len);
    double sigma = 0.0;
    for (double& x : p) {
      x = 0.5 * (1.0 - rng.next_double());  // (0, 1/2]
      sigma += x;
    }
    double p0 = 0.0, p1 = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
      double pr = 1.0;
      for (int u = 0; u < len; ++u) pr *= (mask >> u & 1u) ? p[u] : 1.0 - p[u];
      const int bits = std::popcount(mask);
      if (bits == 0) p0 = pr;
      else if (bits == 1) p1 += pr;
    }
    const double lower = sigma * std::pow(4.0, -sigma);
    const double upper = sigma * std::exp(1.0 - sigma);
    require(p1 >= lower, fmt("rep %d: P1=%.17g below sigma 4^-sigma=%.17g", rep, p1, lower));
    require(p1 <= upper, fmt("rep %d: P1=%.17g above sigma e^{1-sigma}=%.17g", rep, p1, upper));
    require(p0 + p1 <= std::exp(-sigma) + upper,
            fmt("rep %d: P<=1 %.17g above e^-sigma + sigma e^{1-sigma}", rep, p0 + p1));
  }
  return "1000 enumerated vectors (len <= 12, p <= 1/2), zero tolerance";
}

// --------------------------------------------------------------------------
// 4. Engine versus the exact oracle: under every rule kind and four staggered
// wake patterns, the empirical distribution of the first success slot matches
// the product of per-slot probabilities from single_slot_success_prob (exact
// because failures remove nobody), on both engine paths.
// --------------------------------------------------------------------------
std::string criterion4() {
  const std::vector<Protocol> protos = {Protocol::beb(), Protocol::exp_opt(), Protocol::whp_opt(),
                                        Protocol::global_elias(), Protocol::global_known_n(16)};
  const std::vector<std::vector<std::pair<Slot, std::uint64_t>>> patterns = {
      {{0, 2}},
      {{0, 1}, {1, 2}},
      {{0, 3}, {2, 1}},
      {{0, 2}, {1, 1}, {2, 2}},
  };
  const int reps = 100000;
  const Slot t_star = 3;
  int case_idx = 0;
  for (const Protocol& proto : protos)
    for (const auto& pattern : patterns) {
      ObliviousSchedule sched;
      for (const auto& [w, c] : pattern) sched.add(w, c);
      std::array<double, 4> slot_p{};
      for (Slot s = 1; s <= t_star; ++s) {
        std::vector<double> probs;
        for (const auto& [w, c] : pattern)
          if (w < s) probs.insert(probs.end(), c, proto.prob(s, s - w));
        slot_p[s] = single_slot_success_prob(probs);
      }
      std::array<double, 4> exact{};
      double none_before = 1.0;
      for (Slot s = 1; s <= t_star; ++s) {
        exact[s] = none_before * slot_p[s];
        none_before *= 1.0 - slot_p[s];
      }
      for (const EnginePath path : {EnginePath::Naive, EnginePath::Cohort}) {
        RunOptions opts;
        opts.path = path;
        const std::uint64_t base =
            derive_seed(0xACCE9701, case_idx * 2 + (path == EnginePath::Cohort ? 1 : 0));
        std::int64_t h1 = 0, h2 = 0, h3 = 0;
#pragma omp parallel for reduction(+ : h1, h2, h3)
        for (int i = 0; i < reps; ++i) {
          const ExecutionTrace trace = run(proto, sched, t_star, derive_seed(base, i), opts);
          Slot first = 0;
          for (const SlotRecord& sr : trace.slots)
            if (sr.success_party) {
              first = sr.slot;
              break;
            }
          if (first == 1) ++h1;
          else if (first == 2) ++h2;
          else if (first == 3) ++h3;
        }
        const std::array<std::int64_t, 4> hits = {0, h1, h2, h3};
        for (Slot s = 1; s <= t_star; ++s) {
          const double freq = double(hits[s]) / reps;
          const double se = std::sqrt(std::max(exact[s] * (1.0 - exact[s]), 1e-12) / reps);
          require(std::abs(freq - exact[s]) <= 4.0 * se,
                  fmt("%s case %d path %d slot %lld: freq %.5f vs exact %.5f (4se=%.5f)",
                      proto.name().c_str(), case_idx, path == EnginePath::Cohort ? 1 : 0,
                      (long long)s, freq, exact[s], 4.0 * se));
        }
      }
      ++case_idx;
    }
  return "20 party sets x 2 paths x 3 slots within 4 stderr of the product-sum oracle";
}

// --------------------------------------------------------------------------
// 5. Counter-game soundness on the 12-config grid: greedy drain never beats
// its certified bound, and the worked configuration reproduces its value.
// --------------------------------------------------------------------------
std::string criterion5() {
  CounterGameSuite suite = default_counter_suite();
  suite.trials = 10000;
  const std::vector<CounterGameRow> rows = run_counter_suite(suite);
  require(rows.size() == 12, fmt("expected 12 rows, got %zu", rows.size()));
  int vacuous = 0;
  bool worked_seen = false;
  for (const CounterGameRow& row : rows) {
    if (row.bound.vacuous) {
      ++vacuous;
      continue;
    }
    require(row.win.rate <= row.bound.value + 3.0 * row.win.stderr_,
            fmt("%s: win rate %.4f above bound %.4f + 3se", row.id.c_str(), row.win.rate,
                row.bound.value));
    if (row.id == "r1000_c5_k1") {
      worked_seen = true;
      require(std::abs(row.bound.value - 0.19710534988658185) <= 1e-12,
              fmt("worked bound %.17g drifted", row.bound.value));
    }
  }
  require(worked_seen, "worked configuration r1000_c5_k1 missing or vacuous");
  require(vacuous == 1, fmt("expected 1 vacuous config, got %d", vacuous));
  return "11 non-vacuous configs respect bound + 3 stderr at 1e4 trials; worked bound 0.19711";
}

// --------------------------------------------------------------------------
// 6. Simple-adversary contention at n = 1e4, eta = 1/2: exact static
// contention stays above 10 ln n across the whole wake window, and no
// success occurs in that window in any of 200 seeded runs.
// --------------------------------------------------------------------------
std::string criterion6() {
  const double threshold = 10.0 * std::log(1e4);
  const ObliviousSchedule sched = simple_adversary(10000, 0.5);
  const Slot window = 117;
  const ContentionSeries series =
      static_contention(sched, Protocol::whp_opt(), FilterSpec::all(), window);
  for (Slot t = 1; t <= window; ++t)
    require(series.static_vals[t - 1] >= threshold,
            fmt("sigma_hat[%lld]=%.4f below %.4f", (long long)t, series.static_vals[t - 1],
                threshold));
  RunOptions opts;
  opts.record_slots = false;
  int bad_runs = 0;
#pragma omp parallel for reduction(+ : bad_runs)
  for (int i = 0; i < 200; ++i) {
    const ExecutionTrace trace = run(Protocol::whp_opt(), sched, window, trial_seed(0xAD5E66, i), opts);
    for (const PartyRecord& pr : trace.parties)
      if (pr.success_slot) {
        ++bad_runs;
        break;
      }
  }
  require(bad_runs == 0, fmt("%d of 200 runs saw a success inside [1, 117]", bad_runs));
  return "sigma_hat >= 92.1034 exactly on [1,117]; 0/200 runs had any success there";
}

// --------------------------------------------------------------------------
// 7. Layered-adversary certification at n = 4096, beta = 10, gamma = 1 under
// whp_opt, plus the tracked-party survival level over the certified window.
// --------------------------------------------------------------------------
std::string criterion7() {
  const LocalRule rule = as_local_rule(Protocol::whp_opt());
  const LayeredAdversaryReport rep = layered_adversary(4096, rule, 10.0, 1.0, 0xBEEF07, 100);
  require(rep.verified, fmt("not verified after %d resamples", rep.resample_count));
  require(rep.resample_count <= 100, fmt("resample count %d above 100", rep.resample_count));
  const double survival =
      restricted_window_experiment(Protocol::whp_opt(), rep.schedule, rep.t1, 1000, 0x5317E1);
  require(survival >= 0.84, fmt("survival %.4f below 0.84 over [1, %lld]", survival,
                                (long long)rep.t1));
  return fmt("verified with %d resample(s); survival %.4f over [1, T1=%lld]", rep.resample_count,
             survival, (long long)rep.t1);
}

double mean_max_latency(const std::vector<TrialOutcome>& outcomes) {
  double sum = 0.0;
  for (const TrialOutcome& out : outcomes) {
    Slot mx = 0;
    for (const PartyRecord& pr : out.parties) {
      const Slot lat = pr.success_slot ? *pr.success_slot - pr.wake_slot : out.horizon + 1;
      mx = std::max(mx, lat);
    }
    sum += double(mx);
  }
  return sum / double(outcomes.size());
}

// --------------------------------------------------------------------------
// 8. Shared-clock scaling: with C fitted at n = 2^8, the mean max latency of
// global_elias under synchronous wake-up stays within 1.5 C n zeta(2 lambda+1)
// up to n = 2^12.
// --------------------------------------------------------------------------
std::string criterion8() {
  double fit_c = 0.0;
  std::string ratios;
  for (int e = 8; e <= 12; ++e) {
    const std::uint64_t n = std::uint64_t(1) << e;
    const double scale = double(n) * elias::zeta(2.0 * block_lambda(n, 1.0) + 1.0);
    const std::vector<TrialOutcome> outs =
        run_trials(Protocol::global_elias(), synchronous(n), kDefaultHorizonCap, 50, 0x61A5 + e, {});
    const double mm = mean_max_latency(outs);
    const double ratio = mm / scale;
    if (e == 8) fit_c = ratio;
    else
      require(mm <= 1.5 * fit_c * scale,
              fmt("n=%llu: mean max %.0f above 1.5*C*n*zeta = %.0f", (unsigned long long)n, mm,
                  1.5 * fit_c * scale));
    ratios += fmt(" %.4f", ratio);
  }
  return "mean max / (n zeta):" + ratios;
}

// --------------------------------------------------------------------------
// 9. Local-clock comparison: exp_opt mean max latency grows within 1.5 C of
// n log2 n / log2 log2 n (C fitted at n = 2^8), and exp_opt beats beb in mean
// latency at n = 2^12 under the per-slot batch adversary.
// --------------------------------------------------------------------------
std::string criterion9() {
  double fit_c = 0.0;
  std::string ratios;
  for (int e = 8; e <= 12; ++e) {
    const std::uint64_t n = std::uint64_t(1) << e;
    const double scale = double(n) * double(e) / std::log2(double(e));
    const std::vector<TrialOutcome> outs =
        run_trials(Protocol::exp_opt(), synchronous(n), kDefaultHorizonCap, 50, 0x9B1D + e, {});
    const double mm = mean_max_latency(outs);
    const double ratio = mm / scale;
    if (e == 8) fit_c = ratio;
    else
      require(mm <= 1.5 * fit_c * scale,
              fmt("n=%llu: mean max %.0f above 1.5*C*n*log2 n/log2 log2 n = %.0f",
                  (unsigned long long)n, mm, 1.5 * fit_c * scale));
    ratios += fmt(" %.3f", ratio);
  }
  const std::uint64_t rate = 12;  // ceil(log2 4096)
  const ObliviousSchedule batch = batch_per_slot(rate, Slot(4096 / rate));
  const Slot horizon = Slot(1) << 21;
  const std::vector<TrialOutcome> exp_outs =
      run_trials(Protocol::exp_opt(), batch, horizon, 5, 0xCAB101, {});
  const std::vector<TrialOutcome> beb_outs =
      run_trials(Protocol::beb(), batch, horizon, 2, 0xCAB202, {});
  const double exp_mean = latency_stats(exp_outs, 0.5).mean;
  const double beb_mean = latency_stats(beb_outs, 0.5).mean;
  require(exp_mean < beb_mean,
          fmt("exp_opt mean %.1f not below beb mean %.1f under batch adversary", exp_mean,
              beb_mean));
  return fmt("ratios%s; batch means exp_opt %.0f < beb %.0f", ratios.c_str(), exp_mean, beb_mean);
}

// --------------------------------------------------------------------------
// 10. Filter properties: b_beta is non-increasing, and the high-slot count
// obeys n_high(k) <= s(k) / b_beta(k) for whp_opt and 50 synthetic rules.
// --------------------------------------------------------------------------
std::string criterion10() {
  const double kE = 2.718281828459045;
  for (const double beta : {kE, 3.0, 10.0}) {
    double prev = 1.0;
    for (Slot t = 1; t <= 1000000; ++t) {
      const double b = b_beta(t, beta);
      require(b <= prev, fmt("b_beta(%lld, %.3f)=%.17g above previous %.17g", (long long)t, beta,
                             b, prev));
      prev = b;
    }
  }
  const Slot k = 1000000;
  const auto check_rule = [&](const LocalRule& rule, double beta) {
    const double s = s_prefix(rule, k);
    const double b = b_beta(k, beta);
    const std::uint64_t nh = n_high(rule, k, beta);
    require(double(nh) <= s / b, fmt("%s (beta %.3f): n_high %llu above s/b = %.2f",
                                     rule.name.c_str(), beta, (unsigned long long)nh, s / b));
  };
  for (const double beta : {kE, 3.0, 10.0}) check_rule(as_local_rule(Protocol::whp_opt()), beta);
  SplitMix64 rng(0xF117E44);
  for (int i = 0; i < 50; ++i) {
    const double amp = 0.5 + 3.5 * rng.next_double();
    const double alpha = 0.5 + 1.5 * rng.next_double();
    const LocalRule rule{
        [amp, alpha](Slot j) { return std::min(0.5, amp / std::pow(double(j), alpha)); },
        fmt("power_rule_%d", i)};
    check_rule(rule, 3.0);
  }
  return "b_beta non-increasing to 1e6 for beta in {e,3,10}; n_high bound on 53 rules at k=1e6";
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* what;
    std::string (*body)();
  };
  const Entry entries[] = {
      {1, "omega-code exactness", criterion1},
      {2, "clock-synchronization coverage", criterion2},
      {3, "single-slot success sandwich", criterion3},
      {4, "engine agrees with the exact oracle", criterion4},
      {5, "counter-game bound soundness", criterion5},
      {6, "simple-adversary contention window", criterion6},
      {7, "layered-adversary certification", criterion7},
      {8, "shared-clock latency scaling", criterion8},
      {9, "local-clock latency comparison", criterion9},
      {10, "filter threshold properties", criterion10},
  };
  int failures = 0;
  for (const Entry& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
      detail = e.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.msg;
    } catch (const std::exception& ex) {
      ok = false;
      detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", e.id, e.what,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf(failures == 0 ? "all 10 criteria passed\n" : "%d of 10 criteria failed\n", failures);
  return failures;
}
