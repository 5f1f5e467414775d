#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace proxlab {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so sweeps can split work by stream index and get
// results independent of worker count or evaluation order.  The mixer is the
// splitmix64 finalizer, which passes the usual statistical batteries when
// applied to distinct counters.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    std::uint64_t key = mix(seed ^ mix(stream));
    return mix(key ^ mix(counter++));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; consumes two draws per call.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

// FNV-1a over a label gives stable stream identifiers for named purposes.
inline std::uint64_t stream_id(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// One independent stream per (purpose, task index): the canonical way every
// search, sweep, and sampler in the library derives its randomness.
inline CounterRng task_rng(std::uint64_t seed, std::string_view purpose,
                           std::uint64_t task = 0) {
  return CounterRng{seed, stream_id(purpose) ^ (task * 0x9e3779b97f4a7c15ull), 0};
}

}  // namespace proxlab
