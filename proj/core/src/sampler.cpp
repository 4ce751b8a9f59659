#include "bset/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "bset/errors.hpp"

namespace bset {

SurvivalCache::SurvivalCache(ProbabilityProfile profile, std::uint64_t max_index)
    : profile_(std::move(profile)), max_index_(max_index) {
  if (max_index_ < 1) throw ConfigError("SurvivalCache: max_index must be >= 1");
  chunks_.resize((max_index_ - 1) / kChunkSize + 1);
}

const SurvivalCache::Chunk& SurvivalCache::chunk(std::uint64_t c) {
  if (c >= chunks_.size()) throw NumericError("SurvivalCache: index beyond range");
  if (c < built_.load(std::memory_order_acquire)) return *chunks_[c];
  std::lock_guard<std::mutex> lock(build_mutex_);
  std::uint64_t built = built_.load(std::memory_order_relaxed);
  while (built <= c) {
    auto next = std::make_unique<Chunk>();
    next->base = built == 0
                     ? 0.0
                     : chunks_[built - 1]->base + chunks_[built - 1]->cum.back();
    const std::uint64_t first = built * kChunkSize + 1;
    const std::uint64_t last = std::min(max_index_, (built + 1) * kChunkSize);
    next->cum.reserve(last - first + 1);
    double running = 0.0;
    for (std::uint64_t k = first; k <= last; ++k) {
      const double p = profile_.prob_at(k);
      if (p < 1.0) running += std::log1p(-p);  // p == 1 contributes 0
      next->cum.push_back(running);
    }
    chunks_[built] = std::move(next);
    ++built;
    built_.store(built, std::memory_order_release);
  }
  return *chunks_[c];
}

double SurvivalCache::prefix(std::uint64_t m) {
  if (m == 0) return 0.0;
  const std::uint64_t c = (m - 1) / kChunkSize;
  const Chunk& ch = chunk(c);
  return ch.base + ch.cum[(m - 1) % kChunkSize];
}

std::optional<std::uint64_t> SurvivalCache::find_crossing(std::uint64_t current,
                                                          double threshold,
                                                          std::uint64_t n) {
  std::uint64_t m_lo = current + 1;
  while (m_lo <= n) {
    const std::uint64_t c = (m_lo - 1) / kChunkSize;
    const Chunk& ch = chunk(c);
    const std::uint64_t chunk_first = c * kChunkSize + 1;
    const std::uint64_t chunk_last =
        std::min(n, chunk_first + ch.cum.size() - 1);
    // S is non-increasing; the crossing is in this chunk iff its last
    // in-range value is already at or below the threshold.
    if (ch.base + ch.cum[chunk_last - chunk_first] <= threshold) {
      std::uint64_t lo = std::max(m_lo, chunk_first);
      std::uint64_t hi = chunk_last;
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ch.base + ch.cum[mid - chunk_first] <= threshold)
          hi = mid;
        else
          lo = mid + 1;
      }
      return lo;
    }
    m_lo = chunk_last + 1;
  }
  return std::nullopt;
}

Realization sample_naive(const ProbabilityProfile& profile, std::uint64_t n,
                         RngStream& rng, std::uint64_t start) {
  if (n < 1 || start >= n) throw ConfigError("sample_naive: need start < n, n >= 1");
  Realization r;
  r.range_end = n;
  r.sampler_kind = SamplerKind::Naive;
  r.profile_digest = profile.digest();
  for (std::uint64_t k = start + 1; k <= n; ++k) {
    const double u = rng.next_uniform();
    if (u < profile.prob_at(k)) r.indices.push_back(k);
  }
  return r;
}

std::optional<std::uint64_t> skip_next(SurvivalCache& cache,
                                       std::uint64_t current, double u,
                                       std::uint64_t n) {
  if (u == 0.0) {
    for (std::uint64_t m = current + 1; m <= n; ++m)
      if (cache.profile().prob_at(m) > 0.0) return m;
    return std::nullopt;
  }
  const double threshold = cache.prefix(current) + std::log(u);
  return cache.find_crossing(current, threshold, n);
}

std::optional<std::uint64_t> skip_oracle(const ProbabilityProfile& profile,
                                         std::uint64_t current, double u,
                                         std::uint64_t n) {
  if (u == 0.0) {
    for (std::uint64_t m = current + 1; m <= n; ++m)
      if (profile.prob_at(m) > 0.0) return m;
    return std::nullopt;
  }
  // Same two-level accumulation as SurvivalCache: within-chunk running sum,
  // chunk totals folded into the base at each boundary.
  double base = 0.0;
  double chunk_sum = 0.0;
  double threshold = 0.0;
  bool threshold_set = current == 0;
  if (threshold_set) threshold = std::log(u);
  for (std::uint64_t m = 1; m <= n; ++m) {
    if (m != 1 && (m - 1) % SurvivalCache::kChunkSize == 0) {
      base += chunk_sum;
      chunk_sum = 0.0;
    }
    const double p = profile.prob_at(m);
    if (p < 1.0) chunk_sum += std::log1p(-p);
    const double s = base + chunk_sum;
    if (!threshold_set) {
      if (m == current) {
        threshold = s + std::log(u);
        threshold_set = true;
      }
      continue;
    }
    if (m > current && s <= threshold) return m;
  }
  return std::nullopt;
}

Realization sample_skip(const ProbabilityProfile& profile, std::uint64_t n,
                        RngStream& rng, std::uint64_t start,
                        SurvivalCache* cache) {
  if (n < 1 || start >= n) throw ConfigError("sample_skip: need start < n, n >= 1");
  std::unique_ptr<SurvivalCache> local;
  if (cache == nullptr) {
    local = std::make_unique<SurvivalCache>(profile, n);
    cache = local.get();
  }
  if (cache->max_index() < n)
    throw ConfigError("sample_skip: cache does not cover the requested range");
  Realization r;
  r.range_end = n;
  r.sampler_kind = SamplerKind::Skip;
  r.profile_digest = profile.digest();
  std::uint64_t current = start;
  while (current < n) {
    if (profile.prob_at(current + 1) >= 1.0) {  // certain success, no uniform
      ++current;
      r.indices.push_back(current);
      continue;
    }
    const double u = rng.next_uniform();
    const auto m = skip_next(*cache, current, u, n);
    if (!m) break;
    r.indices.push_back(*m);
    current = *m;
  }
  return r;
}

Realization sample(const ProbabilityProfile& profile, SamplerKind kind,
                   std::uint64_t n, std::uint64_t seed, SurvivalCache* cache) {
  RngStream rng(seed);
  Realization r = kind == SamplerKind::Naive
                      ? sample_naive(profile, n, rng)
                      : sample_skip(profile, n, rng, 0, cache);
  r.seed = seed;
  return r;
}

}  // namespace bset
