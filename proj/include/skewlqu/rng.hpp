#pragma once

// Counter-based stream derivation: a stream is named by a tuple of integers
// (master seed, trial index, sub-stream, ...) and its generator seed is a
// SplitMix64 hash chain over that tuple. Streams never depend on the order in
// which other streams were consumed, so results are independent of scheduling.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace skewlqu {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = 0x5851f42d4c957f2dULL;
  for (std::uint64_t v : path) h = splitmix64(h ^ splitmix64(v));
  return h;
}

class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}
  Rng(std::initializer_list<std::uint64_t> path) : Rng(derive_seed(path)) {}

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t tag) const { return Rng(derive_seed({seed_, tag})); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }
  std::uint64_t seed() const { return seed_; }
  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  std::uint64_t seed_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace skewlqu
