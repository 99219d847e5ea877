#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace quiverloop {

// Counter-based 64-bit generator: the k-th output is a SplitMix64
// finalisation of key + k * golden. Streams for different keys are
// independent and need no shared state, so any (seed, edge, block,
// sample) tuple can be regenerated on any worker.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::initializer_list<std::uint64_t> key) {
    std::uint64_t k = 0x6a09e667f3bcc909ull;
    for (std::uint64_t part : key) k = mix(k ^ mix(part + 0x9e3779b97f4a7c15ull));
    key_ = k;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace quiverloop
