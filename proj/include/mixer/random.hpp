#pragma once

#include <cstdint>
#include <random>

namespace mixer {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded, splittable random stream.
///
/// Substreams are keyed by an index, so parallel workers that draw block `i`
/// always see the same numbers regardless of how blocks map onto threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), engine_(splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL))) {}

  RandomStream split(std::uint64_t index) const {
    return RandomStream(splitmix64(seed_ + 0x632be59bd9b4e019ULL * (stream_ + 1)), index);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n); n > 0. Rejection sampling keeps it exactly uniform.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double uniform01() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace mixer
