#include "ipd/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ipd {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

bool Rng::bernoulli(double p) {
  return uniform() < p;
}

double Rng::gaussian() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::exponential() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return -std::log(u);
}

Rng Rng::derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = master;
  std::uint64_t acc = splitmix64(s);
  for (std::uint64_t label : path) {
    std::uint64_t mixed = acc ^ (label + 0x9e3779b97f4a7c15ULL);
    acc = splitmix64(mixed);
  }
  return Rng(acc);
}

}  // namespace ipd
