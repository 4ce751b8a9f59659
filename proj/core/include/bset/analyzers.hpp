#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "bset/bounded_gap_set.hpp"
#include "bset/realization.hpp"

namespace bset {

// Integer endpoints of the block (a^n, a^(n+1)]: members are the integers k
// with lo < k <= hi. Computed in extended precision so boundary integers are
// classified exactly. Throws NumericError past the representable range.
std::pair<std::uint64_t, std::uint64_t> block_bounds(double a, int n);

struct BlockCounts {
  double base_a = 2.0;
  int first_n = 0;
  int last_n = 0;
  std::vector<std::uint64_t> counts;         // N_n per block
  std::vector<std::uint64_t> block_lengths;  // L_n = integers in the block
};

// N_n = |E intersect (a^n, a^(n+1)]| for n in [first_n, last_n], by binary
// search over the sorted index list. The window must fit in r.range_end.
BlockCounts block_counts(const Realization& r, double a, int first_n, int last_n);

class GapStats {
 public:
  explicit GapStats(std::vector<std::uint64_t> indices);

  const std::vector<std::uint64_t>& gaps() const { return gaps_; }
  // Minimum among the last w gaps (all gaps if fewer); nullopt when no gaps.
  std::optional<std::uint64_t> tail_min_gap(std::size_t w) const;
  // Number of k with both k and k + lag in E.
  std::uint64_t pair_coincidences(std::uint64_t lag) const;
  const std::vector<std::uint64_t>& indices() const { return indices_; }

 private:
  std::vector<std::uint64_t> indices_;
  std::vector<std::uint64_t> gaps_;
};

inline GapStats gap_sequence(const Realization& r) { return GapStats(r.indices); }

struct LacunarityStats {
  std::vector<double> ratios;  // n_{k+1} / n_k
  std::vector<std::uint64_t> adjacent_block_products;  // N_n * N_{n+1}

  // Infimum of the last w ratios (all if fewer); nullopt when no ratios.
  std::optional<double> tail_inf(std::size_t w) const;
};

LacunarityStats lacunarity_stats(const Realization& r, const BlockCounts& bc);

struct APReport {
  int length = 3;
  std::uint64_t count = 0;   // all progressions found, even past the cap
  bool truncated = false;    // instance list hit the storage cap
  std::vector<std::pair<std::uint64_t, std::uint64_t>> instances;  // (start, step)
};

// All arithmetic progressions of exactly `length` terms (step >= 1) inside
// the realization, enumerated from ordered first-term pairs. Stores at most
// `instance_cap` witnesses but keeps counting.
APReport find_aps(const Realization& r, int length,
                  std::uint64_t instance_cap = 10000);

// Prop-style step-1 block events: k in [0, k_max] such that the whole block
// {i + k*l : i = 1..l} lies inside E.
std::vector<std::uint64_t> ap_block_events(const Realization& r, int l,
                                           std::uint64_t k_max);

struct IntersectionResult {
  bool nonempty = false;
  std::optional<std::uint64_t> first_hit;
};

IntersectionResult intersect_bounded_gap(const Realization& r,
                                         const BoundedGapSet& s);

// CSV emitters (comma separator, header row, LF endings).
void write_block_counts_csv(std::ostream& out, const BlockCounts& bc);
void write_gaps_csv(std::ostream& out, const GapStats& gs);
void write_aps_csv(std::ostream& out, const APReport& report);

}  // namespace bset
