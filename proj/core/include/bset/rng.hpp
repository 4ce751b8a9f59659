// Counter-based PRNG with deterministic sub-stream derivation.
//
// The generator walks a 64-bit counter in steps of the golden-ratio constant
// and finalizes each counter value with the SplitMix64 avalanche mix
// (Steele/Lea/Flood, "Fast splittable pseudorandom number generators").
// Sub-stream seeds are derived from (master_seed, stream_index) by mixing the
// stream index through the same avalanche and xoring into the master seed:
//
//   substream_seed(m, i) = mix64(m ^ mix64(i + 0x9E3779B97F4A7C15))
//
// Distinct stream indices therefore land in unrelated regions of the counter
// orbit, which is what the per-trial parallel Monte Carlo harness relies on.
#pragma once

#include <cstdint>

namespace bset {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t master_seed,
                                       std::uint64_t stream_index) noexcept {
  return mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15ULL));
}

class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 significant bits; never returns 1.
  constexpr double next_uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bset
