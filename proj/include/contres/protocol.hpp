#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace contres {

using Slot = std::int64_t;

// Transmission-probability rules. All kinds are memoryless: the probability is
// a pure function of (global time, local time). The Local* kinds depend on
// local time only; the Global* kinds also read the shared clock.
enum class ProtocolKind {
  MemorylessBeb,  // min(1/2, 1/t_loc)
  ExpOpt,         // 1 / 2^ceil(log2 ceil(1 + j/10))
  WhpOpt,         // x / 2^x with x = ceil(log2 ceil(1 + j/10))
  GlobalElias,    // min(1/2, 2^a'(t) / t_loc)
  GlobalKnownN,   // min(1/2, 2^k(t) / t_loc), k cycling {-2L..2L}, L = ceil(log2 log2 N)
};

struct ClockContext {
  Slot global_time;  // t >= 1
  Slot local_time;   // t - t_u, >= 1, <= global_time
};

struct Protocol {
  ProtocolKind kind = ProtocolKind::MemorylessBeb;
  std::uint64_t known_n = 0;  // GlobalKnownN only, >= 4

  bool local_clock() const;
  double prob(Slot t, Slot t_loc) const;
  // Local kinds only; throws for GlobalClock kinds.
  double local_prob(Slot t_loc) const;
  // Wake-up probability p(1). Local kinds only.
  double eta() const { return local_prob(1); }
  std::string name() const;

  bool operator==(const Protocol&) const = default;

  static Protocol beb() { return {ProtocolKind::MemorylessBeb, 0}; }
  static Protocol exp_opt() { return {ProtocolKind::ExpOpt, 0}; }
  static Protocol whp_opt() { return {ProtocolKind::WhpOpt, 0}; }
  static Protocol global_elias() { return {ProtocolKind::GlobalElias, 0}; }
  static Protocol global_known_n(std::uint64_t n);
  static Protocol from_name(const std::string& name, std::uint64_t known_n = 0);
};

double prob(const Protocol& proto, const ClockContext& ctx);

// Individual rules. Local time >= 1 everywhere.
double beb_prob(Slot t_loc);
double exp_opt_prob(Slot t_loc);
double whp_opt_prob(Slot t_loc);
double global_elias_prob(Slot t, Slot t_loc);
double known_n_prob(Slot t, Slot t_loc, std::uint64_t n);

// Type-erased local-clock rule. Analysis and adversary routines accept these
// so synthetic rules can be exercised alongside the built-in kinds.
struct LocalRule {
  std::function<double(Slot)> p;
  std::string name;
  double operator()(Slot t_loc) const { return p(t_loc); }
  double eta() const { return p(1); }
};

// Throws std::invalid_argument for GlobalClock kinds.
LocalRule as_local_rule(const Protocol& proto);

}  // namespace contres
