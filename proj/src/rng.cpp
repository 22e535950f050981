#include "rrk/rng.hpp"

#include <cmath>

namespace rrk {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return splitmix64_mix(seed_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  // (k + 1) / 2^53 for k in [0, 2^53)
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::exponential() { return -std::log(uniform()); }

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // rejection to stay unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_mix(seed ^ splitmix64_mix(index * kGolden + 0x632BE59BD9B4E019ULL));
}

}  // namespace rrk
