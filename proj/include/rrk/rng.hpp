#pragma once

#include <cstdint>

namespace rrk {

// Counter-based generator: draw k of a stream seeded with s is
// splitmix64_mix(s + (k + 1) * 0x9E3779B97F4A7C15). The output depends only on
// (seed, counter), so sample streams are reproducible on every platform with
// IEEE doubles.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform on (0, 1], 53-bit resolution.
  double uniform();
  // Standard exponential variate, -log(U).
  double exponential();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

// Seed of the index-th member of a campaign seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rrk
