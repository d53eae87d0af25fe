#include "contres/counter_game.hpp"

#include <cmath>
#include <stdexcept>

#include "contres/rng.hpp"

namespace contres {

void CounterGameConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("counter game: rounds >= 1 required");
  if (!(c >= 0.0) || c > double(rounds))
    throw std::invalid_argument("counter game: c in [0, rounds] required");
  if (counters.size() != gammas.size())
    throw std::invalid_argument("counter game: one gamma per counter required");
  for (std::int64_t v : counters)
    if (v < 0) throw std::invalid_argument("counter game: counters must be >= 0");
  const double floor = c / double(rounds);
  for (double g : gammas)
    if (!(g >= floor && g <= 1.0))
      throw std::invalid_argument("counter game: gammas must lie in [c/rounds, 1]");
}

std::uint64_t counter_game_run(const CounterGameConfig& cfg, const CounterStrategy& strategy,
                               std::uint64_t seed) {
  cfg.validate();
  SplitMix64 g(seed);
  std::vector<std::int64_t> counters = cfg.counters;
  const std::size_t k = cfg.options();
  const double end_prob = cfg.c / double(cfg.rounds);

  for (std::uint64_t round = 1; round <= cfg.rounds; ++round) {
    const std::size_t choice = strategy(CounterGameState{round, counters});
    if (choice < 1 || choice > k)
      throw std::out_of_range("counter game: strategy chose an invalid option");
    if (choice == k) {
      if (g.next_double() < end_prob) return round - 1;
    } else {
      if (g.next_double() < cfg.gammas[choice - 1]) {
        if (--counters[choice - 1] < 0) return round - 1;
      }
    }
  }
  return cfg.rounds;
}

CounterGameBound counter_game_bound(const CounterGameConfig& cfg) {
  cfg.validate();
  CounterGameBound b;
  b.alpha = 0.0;
  b.beta_sum = 0.0;
  for (std::size_t i = 0; i < cfg.counters.size(); ++i) {
    b.alpha += std::exp(-double(cfg.counters[i]) / 6.0);
    b.beta_sum += double(cfg.counters[i]) / cfg.gammas[i];
  }
  b.value = b.alpha + std::exp(-cfg.c * (1.0 - 2.0 * b.beta_sum / double(cfg.rounds)));
  b.vacuous = b.value >= 1.0;
  return b;
}

CounterStrategy greedy_drain_strategy(const CounterGameConfig& cfg) {
  const std::size_t k = cfg.options();
  return [k](const CounterGameState& st) {
    for (std::size_t i = 0; i < st.counters.size(); ++i)
      if (st.counters[i] > 0) return i + 1;
    return k;
  };
}

CounterStrategy fixed_option_strategy(std::size_t option) {
  if (option < 1) throw std::invalid_argument("fixed_option_strategy: options are 1-based");
  return [option](const CounterGameState&) { return option; };
}

WinRate counter_game_win_rate(const CounterGameConfig& cfg, const CounterStrategy& strategy,
                              std::uint64_t trials, std::uint64_t seed) {
  cfg.validate();
  if (trials < 1) throw std::invalid_argument("counter_game_win_rate: trials >= 1 required");
  const std::int64_t total = std::int64_t(trials);
  std::int64_t wins = 0;
#pragma omp parallel for schedule(static) reduction(+ : wins)
  for (std::int64_t i = 0; i < total; ++i)
    if (counter_game_run(cfg, strategy, derive_seed(seed, std::uint64_t(i))) == cfg.rounds)
      ++wins;
  WinRate wr;
  wr.wins = std::uint64_t(wins);
  wr.trials = trials;
  wr.rate = double(wins) / double(trials);
  wr.stderr_ = std::sqrt(std::max(0.0, wr.rate * (1.0 - wr.rate) / double(trials)));
  return wr;
}

}  // namespace contres
