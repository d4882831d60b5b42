#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace sagail {

// Deterministic RNG stream. Uses mt19937_64 for the raw bit stream but
// implements its own uniform/normal draws: the std distributions are
// implementation-defined, which would break cross-platform reproducibility
// of training runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent child stream from (seed, path...). The same
  // (seed, path) always yields the same stream, so worker/episode streams
  // can be re-created from scratch.
  Rng derive(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform01();                       // [0, 1)
  double uniform(double lo, double hi);     // [lo, hi)
  int uniform_int(int n);                   // {0, ..., n-1}, n >= 1
  double normal();                          // standard normal, Box-Muller
  bool bernoulli(double p);

  std::string save_state() const;
  void restore_state(const std::string& text);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// splitmix64 step; also used for seed mixing elsewhere.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sagail
