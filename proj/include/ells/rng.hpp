#pragma once

#include <cstdint>
#include <limits>

namespace ells {

/// SplitMix64: tiny splittable generator with explicit 64-bit seeding.
/// Streams derived from (seed, index) are independent by construction,
/// which is what the per-chain reproducibility contract needs.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return double((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // 128-bit multiply rejection-free bound; bias < 2^-64, irrelevant here
    return std::uint64_t((static_cast<__uint128_t>((*this)()) * n) >> 64);
  }

  /// Stream #idx derived from a base seed; distinct idx give distinct,
  /// well-separated states.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t idx) {
    SplitMix64 g(seed ^ (0xA0761D6478BD642FULL * (idx + 1)));
    g();  // burn one state step to decouple nearby seeds
    g();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ells
