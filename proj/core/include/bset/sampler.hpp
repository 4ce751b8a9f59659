#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "bset/profile.hpp"
#include "bset/realization.hpp"
#include "bset/rng.hpp"

namespace bset {

// Chunked cumulative log-survival sums S(m) = sum_{j<=m} log(1 - p_j),
// built lazily and shared read-mostly across trials.
//
// The accumulation order is canonical: within a chunk the terms are added
// ascending into a running chunk sum, and a chunk's base is the previous
// chunk's base plus its final sum. skip_oracle reproduces exactly this
// arithmetic, so the two paths make bit-identical threshold decisions.
//
// Indices with p = 1 contribute 0 here instead of -infinity; the samplers
// emit them deterministically before any jump (valid as long as certain
// successes form a finite prefix, per the sampler precondition).
class SurvivalCache {
 public:
  static constexpr std::uint64_t kChunkSize = 1 << 16;

  SurvivalCache(ProbabilityProfile profile, std::uint64_t max_index);

  // S(m); S(0) = 0. m must be <= max_index.
  double prefix(std::uint64_t m);
  // Smallest m in (current, n] with S(m) <= threshold.
  std::optional<std::uint64_t> find_crossing(std::uint64_t current,
                                             double threshold, std::uint64_t n);

  const ProbabilityProfile& profile() const { return profile_; }
  std::uint64_t max_index() const { return max_index_; }

 private:
  struct Chunk {
    double base = 0.0;         // S at the chunk's first index minus one
    std::vector<double> cum;   // within-chunk running sums, ascending
  };
  const Chunk& chunk(std::uint64_t c);

  ProbabilityProfile profile_;
  std::uint64_t max_index_;
  std::vector<std::unique_ptr<Chunk>> chunks_;
  std::atomic<std::uint64_t> built_{0};
  std::mutex build_mutex_;
};

// One Bernoulli draw per index in (start, n]; included iff uniform < p_k.
Realization sample_naive(const ProbabilityProfile& profile, std::uint64_t n,
                         RngStream& rng, std::uint64_t start = 0);

// Inverse-transform jump to the next success: one uniform per success.
// Precondition: p_k = 1 only on a finite prefix of the range.
// Pass a cache to amortize prefix-sum construction across trials; a private
// one is built per call otherwise.
Realization sample_skip(const ProbabilityProfile& profile, std::uint64_t n,
                        RngStream& rng, std::uint64_t start = 0,
                        SurvivalCache* cache = nullptr);

// The fast path's single jump decision: smallest m > current with
// S(m) - S(current) <= log u, i.e. survival product <= u. u = 0 forces the
// first index with p > 0. Returns nullopt when no success occurs by n.
std::optional<std::uint64_t> skip_next(SurvivalCache& cache,
                                       std::uint64_t current, double u,
                                       std::uint64_t n);

// Independent linear-scan reference for skip_next, with the same canonical
// accumulation order; decisions match the fast path exactly.
std::optional<std::uint64_t> skip_oracle(const ProbabilityProfile& profile,
                                         std::uint64_t current, double u,
                                         std::uint64_t n);

// Seed-based convenience wrapper filling full provenance.
Realization sample(const ProbabilityProfile& profile, SamplerKind kind,
                   std::uint64_t n, std::uint64_t seed,
                   SurvivalCache* cache = nullptr);

}  // namespace bset
