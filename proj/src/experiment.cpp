#include "contres/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

#include "contres/csv.hpp"
#include "contres/elias.hpp"
#include "contres/rng.hpp"

namespace contres {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const ordered_json& j, const char* where,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) config_error(std::string(where) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      config_error(std::string(where) + ": unknown key '" + it.key() + "'");
}

void check_version(const ordered_json& j, const char* where) {
  if (!j.contains("version")) config_error(std::string(where) + ": missing 'version'");
  if (j.at("version").get<int>() != kConfigVersion)
    config_error(std::string(where) + ": unsupported version");
}

template <class T>
T require(const ordered_json& j, const char* key, const char* where) {
  if (!j.contains(key)) config_error(std::string(where) + ": missing '" + key + "'");
  return j.at(key).get<T>();
}

ordered_json protocol_to_json(const ProtocolSpec& p) {
  ordered_json j;
  j["name"] = p.name;
  if (p.known_n != 0) j["n"] = p.known_n;
  return j;
}

ProtocolSpec protocol_from_json(const ordered_json& j) {
  check_keys(j, "protocol", {"name", "n"});
  ProtocolSpec p;
  p.name = require<std::string>(j, "name", "protocol");
  p.known_n = j.value("n", std::uint64_t{0});
  return p;
}

ordered_json schedule_to_json(const ScheduleSpec& s) {
  const ScheduleSpec dflt;
  ordered_json j;
  j["name"] = s.name;
  if (s.rate != dflt.rate) j["rate"] = s.rate;
  if (s.duration != dflt.duration) j["duration"] = s.duration;
  if (s.range_end != dflt.range_end) j["range_end"] = s.range_end;
  if (s.beta != dflt.beta) j["beta"] = s.beta;
  if (s.gamma != dflt.gamma) j["gamma"] = s.gamma;
  if (s.max_resamples != dflt.max_resamples) j["max_resamples"] = s.max_resamples;
  if (!s.path.empty()) j["path"] = s.path;
  return j;
}

ScheduleSpec schedule_from_json(const ordered_json& j) {
  check_keys(j, "schedule",
             {"name", "rate", "duration", "range_end", "beta", "gamma", "max_resamples", "path"});
  ScheduleSpec s;
  s.name = require<std::string>(j, "name", "schedule");
  s.rate = j.value("rate", s.rate);
  s.duration = j.value("duration", s.duration);
  s.range_end = j.value("range_end", s.range_end);
  s.beta = j.value("beta", s.beta);
  s.gamma = j.value("gamma", s.gamma);
  s.max_resamples = j.value("max_resamples", s.max_resamples);
  s.path = j.value("path", s.path);
  return s;
}

ordered_json outputs_to_json(const OutputSpec& o) {
  ordered_json j = ordered_json::object();
  if (!o.stats.empty()) j["stats"] = o.stats;
  if (!o.traces_dir.empty()) j["traces_dir"] = o.traces_dir;
  return j;
}

OutputSpec outputs_from_json(const ordered_json& j) {
  check_keys(j, "outputs", {"stats", "traces_dir"});
  OutputSpec o;
  o.stats = j.value("stats", std::string{});
  o.traces_dir = j.value("traces_dir", std::string{});
  return o;
}

ordered_json experiment_to_json_obj(const ExperimentConfig& cfg, bool with_version) {
  ordered_json j;
  if (with_version) j["version"] = cfg.version;
  j["protocol"] = protocol_to_json(cfg.protocol);
  j["schedule"] = schedule_to_json(cfg.schedule);
  j["n"] = cfg.n;
  j["horizon"] = cfg.horizon;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["q"] = cfg.q;
  if (!cfg.outputs.stats.empty() || !cfg.outputs.traces_dir.empty())
    j["outputs"] = outputs_to_json(cfg.outputs);
  return j;
}

ExperimentConfig experiment_from_json_obj(const ordered_json& j, bool with_version) {
  if (with_version) {
    check_keys(j, "config",
               {"version", "protocol", "schedule", "n", "horizon", "trials", "seed", "q",
                "outputs"});
    check_version(j, "config");
  } else {
    check_keys(j, "base",
               {"protocol", "schedule", "n", "horizon", "trials", "seed", "q", "outputs"});
  }
  if (!j.contains("protocol")) config_error("config: missing 'protocol'");
  if (!j.contains("schedule")) config_error("config: missing 'schedule'");
  ExperimentConfig cfg;
  cfg.protocol = protocol_from_json(j.at("protocol"));
  cfg.schedule = schedule_from_json(j.at("schedule"));
  cfg.n = require<std::uint64_t>(j, "n", "config");
  cfg.horizon = require<Slot>(j, "horizon", "config");
  cfg.trials = require<int>(j, "trials", "config");
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.q = j.value("q", 0.5);
  if (j.contains("outputs")) cfg.outputs = outputs_from_json(j.at("outputs"));
  return cfg;
}

ordered_json parse_text(const std::string& text, const char* where) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    config_error(std::string(where) + ": " + e.what());
  }
}

template <class Fn>
auto guarded(const char* where, Fn&& fn) {
  try {
    return fn();
  } catch (const ordered_json::exception& e) {
    config_error(std::string(where) + ": " + e.what());
  }
}

}  // namespace

Protocol ProtocolSpec::build() const { return Protocol::from_name(name, known_n); }

ObliviousSchedule ScheduleSpec::build(std::uint64_t n, const Protocol& proto,
                                      std::uint64_t seed) const {
  if (name == "synchronous") return synchronous(n);
  if (name == "batch_per_slot") {
    if (rate < 1 || duration < 1)
      config_error("schedule batch_per_slot: rate >= 1 and duration >= 1 required");
    return batch_per_slot(rate, duration);
  }
  if (name == "batch_log") {
    const std::uint64_t r = std::max<std::uint64_t>(1, std::bit_width(n - 1));
    return batch_per_slot(r, std::max<Slot>(1, Slot(n / r)));
  }
  if (name == "uniform_random") {
    if (range_end < 1) config_error("schedule uniform_random: range_end >= 1 required");
    return uniform_random(n, range_end, seed);
  }
  if (name == "simple_adversary") return simple_adversary(n, proto.eta());
  if (name == "layered") {
    const LayeredAdversaryReport rep =
        layered_adversary(n, as_local_rule(proto), beta, gamma, seed, max_resamples);
    if (!rep.verified)
      throw std::runtime_error("schedule layered: contention verification failed after " +
                               std::to_string(rep.resample_count) + " resamples");
    return rep.schedule;
  }
  if (name == "csv") {
    if (path.empty()) config_error("schedule csv: path required");
    return schedule_from_csv(read_text_file(path));
  }
  config_error("schedule: unknown name '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (version != kConfigVersion) config_error("config: unsupported version");
  if (n < 1) config_error("config: n >= 1 required");
  if (horizon < 1) config_error("config: horizon >= 1 required");
  if (trials < 1) config_error("config: trials >= 1 required");
  if (!(q > 0.0 && q < 1.0)) config_error("config: q in (0, 1) required");
  protocol.build();
  static constexpr std::string_view kNames[] = {
      "synchronous", "batch_per_slot", "batch_log", "uniform_random",
      "simple_adversary", "layered", "csv"};
  if (std::find(std::begin(kNames), std::end(kNames), schedule.name) == std::end(kNames))
    config_error("schedule: unknown name '" + schedule.name + "'");
  if (schedule.name == "batch_per_slot" && (schedule.rate < 1 || schedule.duration < 1))
    config_error("schedule batch_per_slot: rate >= 1 and duration >= 1 required");
  if (schedule.name == "uniform_random" && schedule.range_end < 1)
    config_error("schedule uniform_random: range_end >= 1 required");
  if (schedule.name == "layered") {
    if (!(schedule.beta >= 10.0)) config_error("schedule layered: beta >= 10 required");
    if (!(schedule.gamma > 0.0)) config_error("schedule layered: gamma > 0 required");
    if (schedule.max_resamples < 1) config_error("schedule layered: max_resamples >= 1 required");
  }
  if (schedule.name == "csv" && schedule.path.empty()) config_error("schedule csv: path required");
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const ordered_json j = parse_text(text, "config");
  ExperimentConfig cfg =
      guarded("config", [&] { return experiment_from_json_obj(j, true); });
  cfg.validate();
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  return experiment_to_json_obj(cfg, true).dump(2) + "\n";
}

Slot HorizonRule::horizon_for(std::uint64_t n, Slot base_horizon) const {
  if (kind == "fixed") return base_horizon;
  if (kind == "per_party") return Slot(std::ceil(factor * double(n)));
  if (kind == "zeta")
    return Slot(std::ceil(factor * double(n) * elias::zeta(2.0 * block_lambda(n, 1.0) + 1.0)));
  config_error("horizon_rule: unknown kind '" + kind + "'");
}

void SweepConfig::validate() const {
  base.validate();
  if (n_values.empty()) config_error("sweep: n_values must be non-empty");
  if (!std::is_sorted(n_values.begin(), n_values.end()) ||
      std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end())
    config_error("sweep: n_values must be strictly ascending");
  if (n_values.front() < 1) config_error("sweep: n_values must be >= 1");
  if (!(horizon_rule.factor > 0.0)) config_error("sweep: horizon factor > 0 required");
  if (horizon_rule.kind != "fixed" && horizon_rule.kind != "per_party" &&
      horizon_rule.kind != "zeta")
    config_error("horizon_rule: unknown kind '" + horizon_rule.kind + "'");
  if (horizon_rule.kind == "zeta" && n_values.front() < 16)
    config_error("sweep: zeta horizon rule needs n >= 16");
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const ordered_json j = parse_text(text, "sweep");
  SweepConfig cfg = guarded("sweep", [&] {
    check_keys(j, "sweep", {"version", "base", "n_values", "horizon_rule"});
    check_version(j, "sweep");
    SweepConfig c;
    if (!j.contains("base")) config_error("sweep: missing 'base'");
    c.base = experiment_from_json_obj(j.at("base"), false);
    c.n_values = require<std::vector<std::uint64_t>>(j, "n_values", "sweep");
    if (j.contains("horizon_rule")) {
      const ordered_json& h = j.at("horizon_rule");
      check_keys(h, "horizon_rule", {"kind", "factor"});
      c.horizon_rule.kind = require<std::string>(h, "kind", "horizon_rule");
      c.horizon_rule.factor = h.value("factor", 1.0);
    }
    return c;
  });
  cfg.validate();
  return cfg;
}

std::string sweep_config_to_json(const SweepConfig& cfg) {
  ordered_json j;
  j["version"] = cfg.base.version;
  j["base"] = experiment_to_json_obj(cfg.base, false);
  j["n_values"] = cfg.n_values;
  j["horizon_rule"] = {{"kind", cfg.horizon_rule.kind}, {"factor", cfg.horizon_rule.factor}};
  return j.dump(2) + "\n";
}

void CounterGameSuite::validate() const {
  if (version != kConfigVersion) config_error("counter suite: unsupported version");
  if (trials < 1) config_error("counter suite: trials >= 1 required");
  if (entries.empty()) config_error("counter suite: entries must be non-empty");
  for (const CounterGameSuiteEntry& e : entries) {
    if (e.id.empty()) config_error("counter suite: entry ids must be non-empty");
    e.config.validate();
  }
}

CounterGameSuite counter_suite_from_json(const std::string& text) {
  const ordered_json j = parse_text(text, "counter suite");
  CounterGameSuite suite = guarded("counter suite", [&] {
    check_keys(j, "counter suite", {"version", "trials", "seed", "entries"});
    check_version(j, "counter suite");
    CounterGameSuite s;
    s.trials = j.value("trials", s.trials);
    s.seed = j.value("seed", s.seed);
    if (!j.contains("entries")) config_error("counter suite: missing 'entries'");
    for (const ordered_json& ej : j.at("entries")) {
      check_keys(ej, "entry", {"id", "rounds", "c", "counters", "gammas"});
      CounterGameSuiteEntry e;
      e.id = require<std::string>(ej, "id", "entry");
      e.config.rounds = require<std::uint64_t>(ej, "rounds", "entry");
      e.config.c = require<double>(ej, "c", "entry");
      e.config.counters = require<std::vector<std::int64_t>>(ej, "counters", "entry");
      e.config.gammas = require<std::vector<double>>(ej, "gammas", "entry");
      s.entries.push_back(std::move(e));
    }
    return s;
  });
  suite.validate();
  return suite;
}

std::string counter_suite_to_json(const CounterGameSuite& suite) {
  ordered_json j;
  j["version"] = suite.version;
  j["trials"] = suite.trials;
  j["seed"] = suite.seed;
  j["entries"] = ordered_json::array();
  for (const CounterGameSuiteEntry& e : suite.entries) {
    ordered_json ej;
    ej["id"] = e.id;
    ej["rounds"] = e.config.rounds;
    ej["c"] = e.config.c;
    ej["counters"] = e.config.counters;
    ej["gammas"] = e.config.gammas;
    j["entries"].push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

CounterGameSuite default_counter_suite() {
  auto entry = [](std::string id, std::uint64_t r, double c, std::vector<std::int64_t> n,
                  std::vector<double> g) {
    return CounterGameSuiteEntry{std::move(id), {r, c, std::move(n), std::move(g)}};
  };
  CounterGameSuite s;
  s.entries = {
      entry("r100_c1_k1", 100, 1.0, {30}, {0.9}),
      entry("r100_c5_k1", 100, 5.0, {24}, {1.0}),
      entry("r100_c5_k2", 100, 5.0, {18, 18}, {0.9, 0.9}),
      entry("r100_c20_k2", 100, 20.0, {12, 12}, {1.0, 1.0}),
      entry("r100_c1_k3", 100, 1.0, {20, 20, 20}, {0.6, 0.6, 0.6}),  // vacuous on purpose
      entry("r1000_c1_k1", 1000, 1.0, {60}, {0.5}),
      entry("r1000_c5_k1", 1000, 5.0, {10}, {0.5}),
      entry("r1000_c20_k2", 1000, 20.0, {30, 30}, {0.8, 0.8}),
      entry("r1000_c1_k3", 1000, 1.0, {25, 25, 25}, {1.0, 1.0, 1.0}),
      entry("r10000_c1_k1", 10000, 1.0, {120}, {0.2}),
      entry("r10000_c5_k2", 10000, 5.0, {100, 100}, {0.25, 0.25}),
      entry("r10000_c20_k3", 10000, 20.0, {40, 40, 40}, {0.5, 0.5, 0.5}),
  };
  return s;
}

SimResult run_sim(const ExperimentConfig& cfg, bool keep_slot_records) {
  cfg.validate();
  const Protocol proto = cfg.protocol.build();
  const ObliviousSchedule sched = cfg.schedule.build(cfg.n, proto, cfg.seed);
  if (cfg.schedule.name == "csv" && sched.total_parties() != cfg.n)
    config_error("schedule csv: file has " + std::to_string(sched.total_parties()) +
                 " parties, config says " + std::to_string(cfg.n));

  FarmOptions fo;
  fo.keep_slot_records = keep_slot_records || !cfg.outputs.traces_dir.empty();
  SimResult res;
  res.outcomes = run_trials(proto, sched, cfg.horizon, cfg.trials, cfg.seed, fo);
  res.stats = latency_stats(std::span<const TrialOutcome>(res.outcomes), cfg.q);

  double acc = 0.0;
  for (const TrialOutcome& o : res.outcomes) {
    Slot mx = 0;
    for (const PartyRecord& p : o.parties)
      mx = std::max(mx, p.success_slot ? *p.success_slot - p.wake_slot : o.horizon + 1);
    acc += double(mx);
  }
  res.mean_max_latency = acc / double(res.outcomes.size());
  return res;
}

std::string sim_stats_json(const ExperimentConfig& cfg, const SimResult& result) {
  const LatencyStats& st = result.stats;
  ordered_json j;
  j["version"] = kConfigVersion;
  j["protocol"] = cfg.protocol.build().name();
  j["schedule"] = cfg.schedule.name;
  j["n"] = cfg.n;
  j["horizon"] = cfg.horizon;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["q"] = cfg.q;
  j["parties"] = st.parties;
  j["censored"] = st.censored;
  j["censored_fraction"] = st.censored_fraction;
  j["mean_latency"] = st.mean;
  j["max_latency"] = st.max;
  j["q_quantile"] = st.q_quantile;
  j["mean_max_latency"] = result.mean_max_latency;
  j["reliable"] = st.reliable;
  j["all_censored"] = st.all_censored;
  return j.dump(2) + "\n";
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (std::uint64_t n : cfg.n_values) {
    ExperimentConfig e = cfg.base;
    e.n = n;
    e.horizon = cfg.horizon_rule.horizon_for(n, cfg.base.horizon);
    e.outputs = {};
    const SimResult r = run_sim(e);
    SweepRow row;
    row.n = n;
    row.horizon = e.horizon;
    row.mean_max_latency = r.mean_max_latency;
    row.q_quantile = r.stats.q_quantile;
    row.censored_fraction = r.stats.censored_fraction;
    row.ratio = r.mean_max_latency / double(n);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,horizon,mean_max_latency,q_quantile,censored_fraction,ratio\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.horizon);
    out += ',';
    out += csv::format_double(r.mean_max_latency);
    out += ',';
    out += std::to_string(r.q_quantile);
    out += ',';
    out += csv::format_double(r.censored_fraction);
    out += ',';
    out += csv::format_double(r.ratio);
    out += '\n';
  }
  return out;
}

std::vector<CounterGameRow> run_counter_suite(const CounterGameSuite& suite) {
  suite.validate();
  std::vector<CounterGameRow> rows;
  for (std::size_t i = 0; i < suite.entries.size(); ++i) {
    const CounterGameSuiteEntry& e = suite.entries[i];
    CounterGameRow row;
    row.id = e.id;
    row.bound = counter_game_bound(e.config);
    row.win = counter_game_win_rate(e.config, greedy_drain_strategy(e.config), suite.trials,
                                    derive_seed(suite.seed, i));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string counter_rows_csv(const std::vector<CounterGameRow>& rows) {
  std::string out = "config_id,win_rate,stderr,bound,vacuous\n";
  for (const CounterGameRow& r : rows) {
    out += r.id;
    out += ',';
    out += csv::format_double(r.win.rate);
    out += ',';
    out += csv::format_double(r.win.stderr_);
    out += ',';
    out += csv::format_double(r.bound.value);
    out += ',';
    out += r.bound.vacuous ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string elias_codes_csv(std::uint64_t max_n) {
  if (max_n < 1) config_error("elias: max_n >= 1 required");
  std::string out = "N,code,code_len\n";
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    out += std::to_string(n);
    out += ',';
    out += elias::encode(n);
    out += ',';
    out += std::to_string(elias::code_len(n));
    out += '\n';
  }
  return out;
}

std::string elias_sync_csv(Slot max_t) {
  if (max_t < 1) config_error("elias: max_t >= 1 required");
  std::string out = "t,a,a_prime\n";
  for (Slot t = 1; t <= max_t; ++t) {
    out += std::to_string(t);
    out += ',';
    out += std::to_string(elias::a_of(t));
    out += ',';
    out += std::to_string(elias::a_prime_of(t));
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("error reading " + path);
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(content.data(), std::streamsize(content.size()));
  if (!out.good()) throw std::runtime_error("error writing " + path);
}

}  // namespace contres
