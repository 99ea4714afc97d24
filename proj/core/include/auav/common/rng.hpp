#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace auav {

// Deterministic random source. mt19937_64 output is fixed by the standard, and the
// uniform/normal transforms below are our own, so draws are identical on every
// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean = 0.0, double sd = 1.0);
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t n);  // [0, n)

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// One root seed split into named, independent substreams ("detector", "network", ...).
// Adding a consumer never shifts the draws of another.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t derive(std::string_view name) const { return splitmix64(seed_ ^ fnv1a64(name)); }
  Rng stream(std::string_view name) const { return Rng(derive(name)); }

 private:
  std::uint64_t seed_;
};

}  // namespace auav
