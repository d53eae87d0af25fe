#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace contres::elias {

// Binary representation of n, most significant bit first ("1", "10", "11", ...).
std::string bin(std::uint64_t n);  // n >= 1

// Omega code of n: Bin() groups of the iterated-log chain, shortest group
// first, terminated by "0". encode(1) == "0", encode(4) == "101000".
std::string encode(std::uint64_t n);  // n >= 1

// Length of encode(n) computed from the chain without materializing it.
int code_len(std::uint64_t n);  // n >= 1

// Decodes the unique codeword at the start of `bits`; the stream is padded
// with infinitely many zeros on the right. Characters other than '1' read as 0.
std::uint64_t decode_prefix(std::string_view bits);

// a(t): omega-decode of the little-endian bit expansion of t (bit i of the
// stream is bit i of t, zeros beyond the word). Decodes whose next group
// would exceed the 64-bit suffix saturate to kSaturatedA; the saturated value
// is even, so downstream exponents treat it as a very large positive shift.
inline constexpr std::uint64_t kSaturatedA = std::uint64_t(1) << 62;
std::uint64_t a_of(std::uint64_t t);  // t >= 1

// a'(t) = (-1)^(a(t) mod 2) * floor(a(t) / 2).
std::int64_t a_prime_of(std::uint64_t t);  // t >= 1

// Iterated base-2 logarithm count: 0 for x <= 1, else 1 + log_star(log2 x).
int log_star(double x);

// zeta(x) = prod_{i=0}^{log_star(x)} 2 * max(log2^(i)(x), 1), for x >= 2.
// Every factor is clamped to at least 2; zeta(2) == 8, zeta(4) == 64.
double zeta(double x);

}  // namespace contres::elias
