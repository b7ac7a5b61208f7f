#pragma once

#include <cstdint>

namespace cewe {

// splitmix64 generator. Small, fast, and fully specified here so that a seed
// produces the same stream on every platform; every stochastic component
// takes one of these explicitly.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n > 0. The modulo bias is O(n / 2^64).
  uint64_t index(uint64_t n) { return u64() % n; }

  // Decorrelated stream for worker `id` derived from one run seed.
  static Rng for_worker(uint64_t seed, int id) {
    Rng mix(seed ^ (0x632be59bd9b4e019ULL * static_cast<uint64_t>(id + 1)));
    return Rng(mix.u64());
  }

 private:
  uint64_t state_;
};

}  // namespace cewe
