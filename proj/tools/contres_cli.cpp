#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "contres/analysis.hpp"
#include "contres/experiment.hpp"
#include "contres/trace.hpp"

namespace {

using namespace contres;

// Files land under --out when given, else content goes to stdout.
void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/" + name, content);
}

std::string trial_file_name(std::uint32_t trial, const char* suffix) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "trial_%05u_%s.csv", trial, suffix);
  return buf;
}

void write_trial_traces(const std::vector<TrialOutcome>& outcomes, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const TrialOutcome& o : outcomes) {
    ExecutionTrace tr;
    tr.parties = o.parties;
    tr.slots = o.slots;
    tr.horizon = o.horizon;
    write_text_file(dir + "/" + trial_file_name(o.trial, "slots"), trace_slots_csv(tr));
    write_text_file(dir + "/" + trial_file_name(o.trial, "parties"), trace_parties_csv(tr));
  }
}

std::string join_under(const std::string& out_dir, const std::string& path) {
  if (out_dir.empty() || path.empty()) return path;
  return out_dir + "/" + path;
}

int cmd_sim(ExperimentConfig cfg, const std::string& out_dir) {
  const SimResult result = run_sim(cfg);
  const std::string stats = sim_stats_json(cfg, result);

  if (!cfg.outputs.traces_dir.empty())
    write_trial_traces(result.outcomes, join_under(out_dir, cfg.outputs.traces_dir));

  if (!cfg.outputs.stats.empty()) {
    const std::string path = join_under(out_dir, cfg.outputs.stats);
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    write_text_file(path, stats);
  } else {
    emit(out_dir, "stats.json", stats);
  }
  return 0;
}

struct AnalyzeArgs {
  std::string slots_path;
  std::string parties_path;
  std::string protocol = "beb";
  std::uint64_t known_n = 0;
  Slot horizon = 0;
  double beta = 0.0;  // 0 = no filter
  Slot from = 1;
  std::uint64_t block_n = 0;  // 0 = skip block report
  double block_c = 1.0;
  Slot t0 = 0;  // 0 = skip density report
  double mu = 0.0;
  Slot delta = 1;
};

int cmd_analyze(const AnalyzeArgs& args, const std::string& out_dir) {
  const ExecutionTrace trace = trace_from_csv(read_text_file(args.slots_path),
                                              read_text_file(args.parties_path), args.horizon);
  const Protocol proto = Protocol::from_name(args.protocol, args.known_n);
  FilterSpec filter = FilterSpec::all();
  if (args.beta > 0.0)
    filter = args.from > 1 ? FilterSpec::low_beta_from(args.beta, args.from)
                           : FilterSpec::low_beta(args.beta);

  emit(out_dir, "contention.csv", contention_to_csv(dynamic_contention(trace, proto, filter)));

  if (args.block_n != 0) {
    ObliviousSchedule sched;
    for (const PartyRecord& p : trace.parties) sched.add(p.wake_slot, 1);
    const Slot hi = trace.slots.empty() ? trace.horizon : trace.slots.back().slot;
    emit(out_dir, "blocks.csv",
         blocks_to_csv(classify_blocks(sched, args.block_n, args.block_c, 1, hi)));
  }

  if (args.t0 != 0) {
    const std::vector<bool> good =
        density_goodness(trace, DensityProfile{args.t0, args.mu, args.delta});
    std::string csv = "interval_index,good\n";
    for (std::size_t i = 0; i < good.size(); ++i)
      csv += std::to_string(i) + "," + (good[i] ? "1" : "0") + "\n";
    emit(out_dir, "goodness.csv", csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contention-resolution protocol simulator and experiment runner"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_override = 0;

  auto* sim = app.add_subcommand("sim", "Run seeded trials and report latency statistics");
  sim->add_option("--config", config_path, "Experiment config JSON")->required();
  auto* sim_seed = sim->add_option("--seed", seed_override, "Override the config seed");
  sim->add_option("--out", out_dir, "Output directory (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment across a list of n values");
  sweep->add_option("--config", config_path, "Sweep config JSON")->required();
  auto* sweep_seed = sweep->add_option("--seed", seed_override, "Override the config seed");
  sweep->add_option("--out", out_dir, "Output directory (default: stdout)");

  auto* counter =
      app.add_subcommand("counter-game", "Monte-Carlo counter games vs the survival bound");
  counter->add_option("--config", config_path, "Suite config JSON (default: built-in grid)");
  auto* counter_seed = counter->add_option("--seed", seed_override, "Override the suite seed");
  counter->add_option("--out", out_dir, "Output directory (default: stdout)");

  std::uint64_t max_n = 64;
  Slot max_t = 64;
  auto* elias = app.add_subcommand("elias", "Dump code and clock-synchronization tables");
  elias->add_option("--max-n", max_n, "Largest integer to encode");
  elias->add_option("--max-t", max_t, "Largest slot for the a/a' table");
  elias->add_option("--out", out_dir, "Output directory (default: stdout)");

  AnalyzeArgs an;
  auto* analyze =
      app.add_subcommand("analyze", "Recompute contention/blocks/goodness from a saved trace");
  analyze->add_option("--slots", an.slots_path, "Trace slots CSV")->required();
  analyze->add_option("--parties", an.parties_path, "Trace parties CSV")->required();
  analyze->add_option("--protocol", an.protocol, "Protocol name (default: beb)");
  analyze->add_option("--known-n", an.known_n, "Party count for global_known_n");
  analyze->add_option("--horizon", an.horizon, "Horizon override (default: last slot)");
  analyze->add_option("--beta", an.beta, "Low-probability filter exponent (default: none)");
  analyze->add_option("--from", an.from, "First local time the filter accepts");
  analyze->add_option("--block-n", an.block_n, "Party count for block classification");
  analyze->add_option("--block-c", an.block_c, "Block constant c (default: 1)");
  analyze->add_option("--t0", an.t0, "Density profile start (enables goodness report)");
  analyze->add_option("--mu", an.mu, "Density profile success rate cap");
  analyze->add_option("--delta", an.delta, "Density profile interval width");
  analyze->add_option("--out", out_dir, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (app.got_subcommand(sim)) {
      ExperimentConfig cfg = experiment_config_from_json(read_text_file(config_path));
      if (sim_seed->count()) cfg.seed = seed_override;
      return cmd_sim(std::move(cfg), out_dir);
    }
    if (app.got_subcommand(sweep)) {
      SweepConfig cfg = sweep_config_from_json(read_text_file(config_path));
      if (sweep_seed->count()) cfg.base.seed = seed_override;
      emit(out_dir, "sweep.csv", sweep_rows_csv(run_sweep(cfg)));
      return 0;
    }
    if (app.got_subcommand(counter)) {
      CounterGameSuite suite = config_path.empty()
                                   ? default_counter_suite()
                                   : counter_suite_from_json(read_text_file(config_path));
      if (counter_seed->count()) suite.seed = seed_override;
      emit(out_dir, "counter_game.csv", counter_rows_csv(run_counter_suite(suite)));
      return 0;
    }
    if (app.got_subcommand(elias)) {
      emit(out_dir, "codes.csv", elias_codes_csv(max_n));
      emit(out_dir, "sync.csv", elias_sync_csv(max_t));
      return 0;
    }
    if (app.got_subcommand(analyze)) return cmd_analyze(an, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
