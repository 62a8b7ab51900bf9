#pragma once

#include <cstdint>

namespace modelset {

/// splitmix64 finalizer; a bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the n-th draw of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, n), so blocks of samples can be generated in
/// any order or on any thread with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t start = 0)
      : key_(mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019ULL))), counter_(start) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace modelset
