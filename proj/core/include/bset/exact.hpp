#pragma once

#include <cstdint>
#include <vector>

#include "bset/bounded_gap_set.hpp"
#include "bset/profile.hpp"

namespace bset {

// Exact Poisson-binomial law of a block count, truncated at count_cap with
// the remaining mass accumulated in `overflow`.
struct BlockDistribution {
  std::vector<double> probs;  // P[N = j], j = 0..count_cap
  double overflow = 0.0;      // P[N > count_cap]

  double at_least(std::uint64_t j) const;  // P[N >= j]
};

// DP sweep over the integers in (a^n, a^(n+1)]. Throws NumericError when the
// block is longer than max_block_len (fall back to Monte Carlo there).
BlockDistribution block_count_distribution(const ProbabilityProfile& profile,
                                           double a, int n, int count_cap,
                                           std::uint64_t max_block_len = 1ULL << 23);

// Same DP over an explicit probability vector (test oracle entry point).
BlockDistribution poisson_binomial(const std::vector<double>& probs, int count_cap);

// P[S intersect E intersect [1, N] is empty] = prod over i in S of (1 - p_i),
// evaluated as exp of a compensated log-survival sum; 0 if any p_i = 1.
double miss_probability(const ProbabilityProfile& profile, const BoundedGapSet& s,
                        std::uint64_t n);

// Expected number of (l+1)-term arithmetic progressions inside [1, N]:
// sum over (i, d), i + l*d <= N, of prod_{k=0..l} p_{i+kd}. O(N^2 / l) terms,
// so N is capped for exactness.
double expected_ap_count(const ProbabilityProfile& profile, int l, std::uint64_t n,
                         std::uint64_t exactness_cap = 100000);

// Expected number of step-1 block events: sum_{k=0..k_max} prod_{i=1..l} p_{i+kl}.
double expected_block_events(const ProbabilityProfile& profile, int l,
                             std::uint64_t k_max);

}  // namespace bset
