#pragma once

#include <cstdint>
#include <limits>

namespace contres {

// All simulation randomness flows through SplitMix64 streams. The algorithm
// name is recorded in trace metadata so a trace can be tied to the generator
// that produced it.
inline constexpr const char* kRngName = "splitmix64";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed and a stream index.
// Used for per-party coin sequences, per-trial seeds and internal streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return SplitMix64(base ^ (0xD1B54A32D192ED03ULL * (stream + 1))).next();
}

// Failures before the first success in Bernoulli(p) trials. Implemented with
// multiplications and comparisons only (no libm), so the sampled value is a
// deterministic function of the drawn word on any IEEE-754 platform.
// Returns UINT64_MAX when p <= 0 (no success ever).
inline std::uint64_t sample_geometric(SplitMix64& g, double p) {
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  if (p >= 1.0) return 0;
  const double q = 1.0 - p;
  const double v = 1.0 - g.next_double();  // (0, 1]
  if (q <= v) return 0;
  // Gallop on squared powers until q^(2^e) <= v.
  double pw[64];
  pw[0] = q;
  int e = 0;
  while (pw[e] > v) {
    double sq = pw[e] * pw[e];
    if (e >= 62) return std::numeric_limits<std::uint64_t>::max();
    pw[++e] = sq;
    if (sq == 0.0) break;
  }
  // Largest k with q^k > v lies in [2^(e-1), 2^e); the answer is that k.
  std::uint64_t k = std::uint64_t(1) << (e - 1);
  double cur = pw[e - 1];
  for (int b = e - 2; b >= 0; --b) {
    double trial = cur * pw[b];
    if (trial > v) {
      cur = trial;
      k += std::uint64_t(1) << b;
    }
  }
  return k;
}

// Number of successes among m Bernoulli(p) trials, via geometric skipping.
// Expected cost O(mp + 1) geometric draws.
inline std::uint64_t sample_binomial(SplitMix64& g, std::uint64_t m, double p) {
  if (m == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return m;
  std::uint64_t successes = 0;
  std::uint64_t remaining = m;
  for (;;) {
    std::uint64_t gap = sample_geometric(g, p);
    if (gap >= remaining) break;
    remaining -= gap + 1;
    ++successes;
    if (remaining == 0) break;
  }
  return successes;
}

}  // namespace contres
