#include "contres/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "contres/elias.hpp"

namespace contres {

namespace {

void check_local_time(Slot t_loc) {
  if (t_loc < 1) throw std::invalid_argument("local time must be >= 1");
}

void check_context(Slot t, Slot t_loc) {
  check_local_time(t_loc);
  if (t < t_loc) throw std::invalid_argument("global time must be >= local time");
}

// ceil(log2 v) for v >= 1.
int ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

// x = ceil(log2 ceil(1 + j/10)); shared by ExpOpt and WhpOpt.
int dyadic_level(Slot j) {
  const std::uint64_t v = 1 + (std::uint64_t(j) + 9) / 10;  // ceil(1 + j/10)
  return ceil_log2(v);
}

}  // namespace

double beb_prob(Slot t_loc) {
  check_local_time(t_loc);
  return std::min(0.5, 1.0 / double(t_loc));
}

double exp_opt_prob(Slot t_loc) {
  check_local_time(t_loc);
  return std::ldexp(1.0, -dyadic_level(t_loc));
}

double whp_opt_prob(Slot t_loc) {
  check_local_time(t_loc);
  const int x = dyadic_level(t_loc);
  return std::ldexp(double(x), -x);
}

double global_elias_prob(Slot t, Slot t_loc) {
  check_context(t, t_loc);
  const std::int64_t ap = elias::a_prime_of(std::uint64_t(t));
  const int e = int(std::clamp<std::int64_t>(ap, -4096, 4096));
  return std::min(0.5, std::ldexp(1.0, e) / double(t_loc));
}

double known_n_prob(Slot t, Slot t_loc, std::uint64_t n) {
  check_context(t, t_loc);
  if (n < 4) throw std::invalid_argument("known-n rule needs N >= 4");
  const int L = std::max(1, int(std::ceil(std::log2(std::log2(double(n))))));
  const Slot period = 4 * L + 1;
  const int k = int(-2 * L + (t % period));
  return std::min(0.5, std::ldexp(1.0, k) / double(t_loc));
}

bool Protocol::local_clock() const {
  switch (kind) {
    case ProtocolKind::MemorylessBeb:
    case ProtocolKind::ExpOpt:
    case ProtocolKind::WhpOpt:
      return true;
    case ProtocolKind::GlobalElias:
    case ProtocolKind::GlobalKnownN:
      return false;
  }
  return false;
}

double Protocol::prob(Slot t, Slot t_loc) const {
  switch (kind) {
    case ProtocolKind::MemorylessBeb:
      return beb_prob(t_loc);
    case ProtocolKind::ExpOpt:
      return exp_opt_prob(t_loc);
    case ProtocolKind::WhpOpt:
      return whp_opt_prob(t_loc);
    case ProtocolKind::GlobalElias:
      return global_elias_prob(t, t_loc);
    case ProtocolKind::GlobalKnownN:
      return known_n_prob(t, t_loc, known_n);
  }
  throw std::logic_error("unknown protocol kind");
}

double Protocol::local_prob(Slot t_loc) const {
  if (!local_clock())
    throw std::invalid_argument("local_prob: " + name() + " reads the global clock");
  return prob(t_loc, t_loc);
}

std::string Protocol::name() const {
  switch (kind) {
    case ProtocolKind::MemorylessBeb:
      return "beb";
    case ProtocolKind::ExpOpt:
      return "exp_opt";
    case ProtocolKind::WhpOpt:
      return "whp_opt";
    case ProtocolKind::GlobalElias:
      return "global_elias";
    case ProtocolKind::GlobalKnownN:
      return "global_known_n:" + std::to_string(known_n);
  }
  return "?";
}

Protocol Protocol::global_known_n(std::uint64_t n) {
  if (n < 4) throw std::invalid_argument("global_known_n: N >= 4 required");
  return {ProtocolKind::GlobalKnownN, n};
}

Protocol Protocol::from_name(const std::string& name, std::uint64_t known_n) {
  if (name == "beb") return beb();
  if (name == "exp_opt") return exp_opt();
  if (name == "whp_opt") return whp_opt();
  if (name == "global_elias") return global_elias();
  if (name == "global_known_n") return global_known_n(known_n);
  if (const std::string prefix = "global_known_n:"; name.starts_with(prefix)) {
    std::size_t used = 0;
    const std::uint64_t n = std::stoull(name.substr(prefix.size()), &used);
    if (used != name.size() - prefix.size())
      throw std::invalid_argument("bad protocol name: " + name);
    return global_known_n(n);
  }
  throw std::invalid_argument("unknown protocol name: " + name);
}

double prob(const Protocol& proto, const ClockContext& ctx) {
  return proto.prob(ctx.global_time, ctx.local_time);
}

LocalRule as_local_rule(const Protocol& proto) {
  if (!proto.local_clock())
    throw std::invalid_argument("as_local_rule: " + proto.name() + " reads the global clock");
  Protocol copy = proto;
  return LocalRule{[copy](Slot j) { return copy.local_prob(j); }, proto.name()};
}

}  // namespace contres
