#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ipd {

// Deterministic random generator (xoshiro256++ seeded through splitmix64).
// Every stochastic component of the library draws through this class so that
// results are reproducible bit-for-bit across platforms and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Unbiased draw from {0, ..., n-1}; n must be positive.
  int uniform_int(int n);

  bool bernoulli(double p);

  // Standard normal via Box-Muller (two uniforms per draw, no cached state).
  double gaussian();

  // Exponential with rate 1.
  double exponential();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent stream addressed by a master seed and a path of labels.
  // Streams with distinct paths are statistically independent, so parallel
  // workers can be seeded without coordinating.
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path);

 private:
  std::uint64_t state_[4];
};

}  // namespace ipd
