#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "contres/analysis.hpp"
#include "contres/counter_game.hpp"
#include "contres/protocol.hpp"
#include "contres/schedule.hpp"
#include "contres/trial_farm.hpp"

// JSON experiment configs and the runners behind the CLI subcommands. Configs
// carry a top-level `version`; unknown keys are rejected so a stored config
// replays exactly or fails loudly. Every output is a pure function of
// (config, seed): trials are keyed by index and pooled in index order.

namespace contres {

inline constexpr int kConfigVersion = 1;

// {"name": ..., "n": N} — n only for global_known_n.
struct ProtocolSpec {
  std::string name = "beb";
  std::uint64_t known_n = 0;

  Protocol build() const;
  bool operator==(const ProtocolSpec&) const = default;
};

// Wake-up schedule selection. Recognized names and their parameters:
//   synchronous       {}                       n parties at slot 0
//   batch_per_slot    {"rate": R, "duration": D}
//   batch_log         {}                       rate ceil(log2 n), duration floor(n/rate)
//   uniform_random    {"range_end": T}         n uniform wake slots in [0, T)
//   simple_adversary  {}                       rate ceil(10 ln n / eta)
//   layered           {"beta": B, "gamma": G, "max_resamples": M}
//   csv               {"path": FILE}           total parties must equal n
// simple_adversary and layered need a local-clock protocol (they read eta/p).
struct ScheduleSpec {
  std::string name = "synchronous";
  std::uint64_t rate = 0;
  Slot duration = 0;
  Slot range_end = 0;
  double beta = 10.0;
  double gamma = 1.0;
  int max_resamples = 100;
  std::string path;

  ObliviousSchedule build(std::uint64_t n, const Protocol& proto, std::uint64_t seed) const;
  bool operator==(const ScheduleSpec&) const = default;
};

struct OutputSpec {
  std::string stats;       // pooled stats JSON path ("" = skip)
  std::string traces_dir;  // per-trial trace CSVs ("" = skip)
  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  int version = kConfigVersion;
  ProtocolSpec protocol;
  ScheduleSpec schedule;
  std::uint64_t n = 1;
  Slot horizon = 1;
  int trials = 1;
  std::uint64_t seed = 0;
  double q = 0.5;
  OutputSpec outputs;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// Horizon as a function of n in sweeps:
//   fixed       base horizon unchanged
//   per_party   ceil(factor * n)
//   zeta        ceil(factor * n * zeta(2*lambda(n, 1) + 1))
struct HorizonRule {
  std::string kind = "fixed";
  double factor = 1.0;

  Slot horizon_for(std::uint64_t n, Slot base_horizon) const;
  bool operator==(const HorizonRule&) const = default;
};

struct SweepConfig {
  ExperimentConfig base;
  std::vector<std::uint64_t> n_values;  // non-empty, ascending
  HorizonRule horizon_rule;

  void validate() const;
  bool operator==(const SweepConfig&) const = default;
};

SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const SweepConfig& cfg);

// Counter-game batch: named configs played by the greedy-drain strategy.
struct CounterGameSuiteEntry {
  std::string id;
  CounterGameConfig config;
  bool operator==(const CounterGameSuiteEntry&) const = default;
};

struct CounterGameSuite {
  int version = kConfigVersion;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::vector<CounterGameSuiteEntry> entries;

  void validate() const;
  bool operator==(const CounterGameSuite&) const = default;
};

CounterGameSuite counter_suite_from_json(const std::string& text);
std::string counter_suite_to_json(const CounterGameSuite& suite);
// Twelve configs spanning rounds {100, 1000, 10000} x c {1, 5, 20} with one to
// three counters, eleven informative and one deliberately vacuous.
CounterGameSuite default_counter_suite();

// ---------------------------------------------------------------------------
// Runners. Output IO lives in the CLI; the only file a runner touches is a
// csv-schedule input.
// ---------------------------------------------------------------------------

struct SimResult {
  LatencyStats stats;
  double mean_max_latency = 0.0;  // per-trial max pooled by mean
  std::vector<TrialOutcome> outcomes;
};

SimResult run_sim(const ExperimentConfig& cfg, bool keep_slot_records = false);
std::string sim_stats_json(const ExperimentConfig& cfg, const SimResult& result);

struct SweepRow {
  std::uint64_t n = 0;
  Slot horizon = 0;
  double mean_max_latency = 0.0;
  Slot q_quantile = 0;
  double censored_fraction = 0.0;
  double ratio = 0.0;  // mean_max_latency / n
};

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::string sweep_rows_csv(const std::vector<SweepRow>& rows);

struct CounterGameRow {
  std::string id;
  WinRate win;
  CounterGameBound bound;
};

std::vector<CounterGameRow> run_counter_suite(const CounterGameSuite& suite);
std::string counter_rows_csv(const std::vector<CounterGameRow>& rows);

// Code table "N,code,code_len" for N = 1..max_n and clock-synchronization
// table "t,a,a_prime" for t = 1..max_t.
std::string elias_codes_csv(std::uint64_t max_n);
std::string elias_sync_csv(Slot max_t);

// Whole-file helpers; throw std::runtime_error on IO failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace contres
