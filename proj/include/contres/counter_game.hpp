#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace contres {

// Round-based survival game with k-1 counters and a terminal option. Playing
// option j < k decrements counter j with probability gamma_j and the game ends
// if the counter drops below zero; playing option k ends the game with
// probability c/r each round. Surviving all r rounds is a win.
struct CounterGameConfig {
  std::uint64_t rounds = 0;             // r >= 1
  double c = 0.0;                       // >= 0
  std::vector<std::int64_t> counters;   // n_i >= 0
  std::vector<double> gammas;           // gamma_i in [c/r, 1]

  std::size_t options() const { return counters.size() + 1; }
  void validate() const;  // throws std::invalid_argument

  bool operator==(const CounterGameConfig&) const = default;
};

struct CounterGameState {
  std::uint64_t round = 1;                       // 1-based
  std::span<const std::int64_t> counters;        // current values
};

// Returns the option to play, 1..k (k = counters.size() + 1).
using CounterStrategy = std::function<std::size_t(const CounterGameState&)>;

// Plays one game; returns rounds survived, capped at r (== r means a win).
// Throws std::out_of_range if the strategy returns an invalid option.
std::uint64_t counter_game_run(const CounterGameConfig& cfg, const CounterStrategy& strategy,
                               std::uint64_t seed);

// alpha + exp(-c (1 - 2 beta / r)) with alpha = sum exp(-n_i/6) and
// beta = sum n_i / gamma_i. Returned unclamped; vacuous flags value >= 1.
struct CounterGameBound {
  double value = 0.0;
  double alpha = 0.0;
  double beta_sum = 0.0;
  bool vacuous = false;
};
CounterGameBound counter_game_bound(const CounterGameConfig& cfg);

// Plays the lowest-index option whose counter is still positive, else option k.
CounterStrategy greedy_drain_strategy(const CounterGameConfig& cfg);

// Always plays the given option (1..k).
CounterStrategy fixed_option_strategy(std::size_t option);

struct WinRate {
  double rate = 0.0;
  double stderr_ = 0.0;  // binomial standard error
  std::uint64_t wins = 0;
  std::uint64_t trials = 0;
};

// Monte-Carlo win rate over `trials` games with per-trial derived seeds.
WinRate counter_game_win_rate(const CounterGameConfig& cfg, const CounterStrategy& strategy,
                              std::uint64_t trials, std::uint64_t seed);

}  // namespace contres
