// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace pedsim {

// Counter-based pseudo-random stream (SplitMix64). Every simulation entity
// owns its own stream derived from (scenario seed, entity name), so editing
// one entity never perturbs another's draws and results stay bit-identical
// across platforms (no std::<distribution> involved anywhere).
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Lemire's multiply-shift; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller (one draw per call, second half discarded
  // to keep each call's stream consumption fixed).
  double gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Poisson via Knuth's product method; fine for the small rates used here.
  int poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    int count = 0;
    double product = next_double();
    while (product > limit) {
      ++count;
      product *= next_double();
    }
    return count;
  }

  bool bernoulli(double p) { return next_double() < p; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_ = 0;
};

// FNV-1a, used to fold entity names into stream keys.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (char c : text) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= 0x100000001B3ull;
  }
  return hash;
}

// Derive an independent stream for (seed, name). An extra mixing round keeps
// streams with related seeds decorrelated.
inline RngStream derive_stream(std::uint64_t seed, std::string_view name) {
  RngStream mixer(seed ^ fnv1a(name));
  return RngStream(mixer.next_u64());
}

inline RngStream derive_stream(std::uint64_t seed, std::string_view name,
                               std::uint64_t index) {
  RngStream mixer(seed ^ fnv1a(name) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return RngStream(mixer.next_u64());
}

}  // namespace pedsim
