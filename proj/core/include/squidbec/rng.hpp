#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "squidbec/constants.hpp"

namespace squidbec {

// splitmix64 — used only to expand a user seed into engine state and to
// derive independent substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable, splittable random stream.
//
// Stream discipline: RandomStream(seed, stream) is an independent generator
// for every (seed, stream) pair; substreams are derived by mixing the stream
// id into the seed with splitmix64 before seeding the mt19937_64 core.
// split(k) of a stream gives the same generator as RandomStream(seed, k) of
// its base seed, so callers can hand out one child per task (e.g. one per
// tomography axis) without coordinating.  All sampling below consumes engine
// words through explicit bit arithmetic only (never std::*_distribution), so
// a fixed (seed, stream) yields a bit-identical sample sequence everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : base_seed_(seed) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    const std::uint32_t w0 = static_cast<std::uint32_t>(splitmix64(s));
    const std::uint64_t m1 = splitmix64(s);
    const std::uint64_t m2 = splitmix64(s);
    std::seed_seq seq{w0, static_cast<std::uint32_t>(m1),
                      static_cast<std::uint32_t>(m1 >> 32),
                      static_cast<std::uint32_t>(m2)};
    engine_.seed(seq);
  }

  // Independent child stream of the same base seed.
  RandomStream split(std::uint64_t stream) const {
    return RandomStream(base_seed_, stream);
  }

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1), 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  // Standard normal via Box-Muller; consumes exactly two engine words.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 == 0.0) u1 = uniform();  // guard the log
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Number of successes in n Bernoulli(p) trials (direct counting: exact,
  // portable, O(n)).
  std::uint64_t bernoulli_count(std::uint64_t n, double p) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (uniform() < p) ++hits;
    }
    return hits;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t base_seed_;
};

}  // namespace squidbec
