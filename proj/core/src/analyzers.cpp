#include "bset/analyzers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "bset/errors.hpp"

namespace bset {

std::pair<std::uint64_t, std::uint64_t> block_bounds(double a, int n) {
  if (!(a > 1.0)) throw ConfigError("block base a must be > 1");
  if (n < 0) throw ConfigError("block index n must be non-negative");
  auto floor_pow = [a](int e) -> std::uint64_t {
    const long double p = std::pow(static_cast<long double>(a), e);
    if (p >= 0x1p62L) throw NumericError("block bound exceeds representable range");
    auto lo = static_cast<std::uint64_t>(std::floor(p));
    // Guard against off-by-one from the long double rounding.
    while (static_cast<long double>(lo + 1) <= p) ++lo;
    while (lo > 0 && static_cast<long double>(lo) > p) --lo;
    return lo;
  };
  return {floor_pow(n), floor_pow(n + 1)};
}

BlockCounts block_counts(const Realization& r, double a, int first_n, int last_n) {
  if (first_n > last_n) throw ConfigError("block window: first_n must be <= last_n");
  BlockCounts bc;
  bc.base_a = a;
  bc.first_n = first_n;
  bc.last_n = last_n;
  for (int n = first_n; n <= last_n; ++n) {
    const auto [lo, hi] = block_bounds(a, n);
    if (hi > r.range_end)
      throw ConfigError("block window exceeds the realization's range");
    const auto begin = std::upper_bound(r.indices.begin(), r.indices.end(), lo);
    const auto end = std::upper_bound(r.indices.begin(), r.indices.end(), hi);
    bc.counts.push_back(static_cast<std::uint64_t>(end - begin));
    bc.block_lengths.push_back(hi - lo);
  }
  return bc;
}

GapStats::GapStats(std::vector<std::uint64_t> indices)
    : indices_(std::move(indices)) {
  if (indices_.size() >= 2) {
    gaps_.reserve(indices_.size() - 1);
    for (std::size_t i = 1; i < indices_.size(); ++i)
      gaps_.push_back(indices_[i] - indices_[i - 1]);
  }
}

std::optional<std::uint64_t> GapStats::tail_min_gap(std::size_t w) const {
  if (gaps_.empty() || w == 0) return std::nullopt;
  const std::size_t first = gaps_.size() > w ? gaps_.size() - w : 0;
  std::uint64_t best = gaps_[first];
  for (std::size_t i = first + 1; i < gaps_.size(); ++i)
    best = std::min(best, gaps_[i]);
  return best;
}

std::uint64_t GapStats::pair_coincidences(std::uint64_t lag) const {
  if (lag == 0) throw ConfigError("pair_coincidences: lag must be >= 1");
  std::uint64_t count = 0;
  for (auto k : indices_)
    if (std::binary_search(indices_.begin(), indices_.end(), k + lag)) ++count;
  return count;
}

std::optional<double> LacunarityStats::tail_inf(std::size_t w) const {
  if (ratios.empty() || w == 0) return std::nullopt;
  const std::size_t first = ratios.size() > w ? ratios.size() - w : 0;
  double best = ratios[first];
  for (std::size_t i = first + 1; i < ratios.size(); ++i)
    best = std::min(best, ratios[i]);
  return best;
}

LacunarityStats lacunarity_stats(const Realization& r, const BlockCounts& bc) {
  LacunarityStats ls;
  for (std::size_t i = 1; i < r.indices.size(); ++i)
    ls.ratios.push_back(static_cast<double>(r.indices[i]) /
                        static_cast<double>(r.indices[i - 1]));
  for (std::size_t i = 1; i < bc.counts.size(); ++i)
    ls.adjacent_block_products.push_back(bc.counts[i - 1] * bc.counts[i]);
  return ls;
}

APReport find_aps(const Realization& r, int length, std::uint64_t instance_cap) {
  if (length < 3) throw ConfigError("find_aps: length must be >= 3");
  APReport report;
  report.length = length;
  const auto& e = r.indices;
  std::unordered_set<std::uint64_t> members(e.begin(), e.end());
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const std::uint64_t start = e[i];
      const std::uint64_t step = e[j] - e[i];
      if (start + static_cast<std::uint64_t>(length - 1) * step > r.range_end)
        break;  // steps only grow with j
      bool full = true;
      for (int t = 2; t < length && full; ++t)
        full = members.count(start + static_cast<std::uint64_t>(t) * step) > 0;
      if (!full) continue;
      if (report.count == std::numeric_limits<std::uint64_t>::max()) continue;
      ++report.count;
      if (report.instances.size() < instance_cap)
        report.instances.emplace_back(start, step);
      else
        report.truncated = true;
    }
  }
  return report;
}

std::vector<std::uint64_t> ap_block_events(const Realization& r, int l,
                                           std::uint64_t k_max) {
  if (l < 3) throw ConfigError("ap_block_events: l must be >= 3");
  if (static_cast<std::uint64_t>(l) * (k_max + 1) > r.range_end)
    throw ConfigError("ap_block_events: window exceeds the realization's range");
  std::vector<std::uint64_t> hits;
  const auto& e = r.indices;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    bool full = true;
    for (int i = 1; i <= l && full; ++i)
      full = std::binary_search(e.begin(), e.end(),
                                static_cast<std::uint64_t>(i) + k * l);
    if (full) hits.push_back(k);
  }
  return hits;
}

IntersectionResult intersect_bounded_gap(const Realization& r,
                                         const BoundedGapSet& s) {
  IntersectionResult out;
  for (auto k : r.indices) {  // ascending, so the first hit is the smallest
    if (s.contains(k)) {
      out.nonempty = true;
      out.first_hit = k;
      break;
    }
  }
  return out;
}

void write_block_counts_csv(std::ostream& out, const BlockCounts& bc) {
  out << "n,N_n,L_n,product_with_next\n";
  for (std::size_t i = 0; i < bc.counts.size(); ++i) {
    out << (bc.first_n + static_cast<int>(i)) << ',' << bc.counts[i] << ','
        << bc.block_lengths[i] << ',';
    if (i + 1 < bc.counts.size()) out << bc.counts[i] * bc.counts[i + 1];
    out << '\n';
  }
}

void write_gaps_csv(std::ostream& out, const GapStats& gs) {
  out << "k,n_k,gap,ratio\n";
  const auto& idx = gs.indices();
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    out << (i + 1) << ',' << idx[i] << ',' << (idx[i + 1] - idx[i]) << ','
        << (static_cast<double>(idx[i + 1]) / static_cast<double>(idx[i]))
        << '\n';
  }
}

void write_aps_csv(std::ostream& out, const APReport& report) {
  out << "i,d,l\n";
  for (const auto& [start, step] : report.instances)
    out << start << ',' << step << ',' << report.length << '\n';
}

}  // namespace bset
