#include "contres/elias.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace contres::elias {

namespace {

// Runs the omega decoder against an arbitrary zero-padded bit source.
template <class BitAt>
std::uint64_t decode_stream(BitAt bit) {
  std::uint64_t n = 1;
  std::uint64_t pos = 0;
  while (bit(pos) == 1) {
    const std::uint64_t len = n + 1;
    if (len > 63) return kSaturatedA;
    std::uint64_t v = 0;
    for (std::uint64_t j = 0; j < len; ++j) v = (v << 1) | std::uint64_t(bit(pos + j));
    pos += len;
    n = v;
  }
  return n;
}

}  // namespace

std::string bin(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bin: n must be positive");
  const int w = std::bit_width(n);
  std::string s(std::size_t(w), '0');
  for (int i = 0; i < w; ++i)
    if ((n >> (w - 1 - i)) & 1) s[std::size_t(i)] = '1';
  return s;
}

std::string encode(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("encode: n must be positive");
  std::string out = "0";
  while (n > 1) {
    out.insert(0, bin(n));
    n = std::uint64_t(std::bit_width(n) - 1);
  }
  return out;
}

int code_len(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("code_len: n must be positive");
  int len = 1;
  while (n > 1) {
    const int fl = std::bit_width(n) - 1;
    len += fl + 1;
    n = std::uint64_t(fl);
  }
  return len;
}

std::uint64_t decode_prefix(std::string_view bits) {
  return decode_stream([bits](std::uint64_t i) {
    return (i < bits.size() && bits[i] == '1') ? 1 : 0;
  });
}

std::uint64_t a_of(std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("a_of: t must be positive");
  return decode_stream([t](std::uint64_t i) {
    return i < 64 ? int((t >> i) & 1) : 0;
  });
}

std::int64_t a_prime_of(std::uint64_t t) {
  const std::uint64_t a = a_of(t);
  const std::int64_t half = std::int64_t(a / 2);
  return (a & 1) ? -half : half;
}

int log_star(double x) {
  int c = 0;
  while (x > 1.0) {
    x = std::log2(x);
    ++c;
  }
  return c;
}

double zeta(double x) {
  if (!(x >= 2.0)) throw std::invalid_argument("zeta: x >= 2 required");
  double prod = 1.0;
  double v = x;
  const int iters = log_star(x);
  for (int i = 0; i <= iters; ++i) {
    prod *= 2.0 * std::max(v, 1.0);
    v = std::log2(std::max(v, 1.0));
  }
  return prod;
}

}  // namespace contres::elias
