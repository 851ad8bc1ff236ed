#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fairsched::rng {

// SplitMix64 finalizer; used for seed derivation so that sub-streams
// (Monte Carlo workers, per-sample draws) are decorrelated from each other
// and from the raw user seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

// Seeded generator wrapping std::mt19937_64. The mapping from raw 64-bit
// draws to uniforms is spelled out here instead of relying on
// std::uniform_*_distribution, whose output is implementation-defined.
class Engine {
public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform on (0, 1]: 53 random mantissa bits, zero excluded.
  double unit_open_closed() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased uniform index in [0, n); rejection sampling over equal buckets.
  std::size_t index(std::size_t n) {
    const std::uint64_t bucket = UINT64_MAX / n;
    std::uint64_t draw;
    do {
      draw = gen_() / bucket;
    } while (draw >= n);
    return static_cast<std::size_t>(draw);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace fairsched::rng
