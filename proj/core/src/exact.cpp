#include "bset/exact.hpp"

#include <cmath>

#include "bset/analyzers.hpp"
#include "bset/errors.hpp"
#include "bset/kahan.hpp"

namespace bset {

double BlockDistribution::at_least(std::uint64_t j) const {
  KahanSum sum;
  for (std::size_t i = j; i < probs.size(); ++i) sum.add(probs[i]);
  sum.add(overflow);
  return sum.value();
}

BlockDistribution poisson_binomial(const std::vector<double>& probs,
                                   int count_cap) {
  if (count_cap < 1) throw ConfigError("poisson_binomial: count_cap must be >= 1");
  BlockDistribution dist;
  dist.probs.assign(static_cast<std::size_t>(count_cap) + 1, 0.0);
  dist.probs[0] = 1.0;
  for (const double p : probs) {
    const double q = 1.0 - p;
    dist.overflow += dist.probs[count_cap] * p;
    for (int j = count_cap; j >= 1; --j)
      dist.probs[j] = dist.probs[j] * q + dist.probs[j - 1] * p;
    dist.probs[0] *= q;
  }
  return dist;
}

BlockDistribution block_count_distribution(const ProbabilityProfile& profile,
                                           double a, int n, int count_cap,
                                           std::uint64_t max_block_len) {
  const auto [lo, hi] = block_bounds(a, n);
  if (hi - lo > max_block_len)
    throw NumericError("block too large for the exact DP; use Monte Carlo");
  std::vector<double> probs;
  probs.reserve(hi - lo);
  for (std::uint64_t k = lo + 1; k <= hi; ++k) probs.push_back(profile.prob_at(k));
  return poisson_binomial(probs, count_cap);
}

double miss_probability(const ProbabilityProfile& profile, const BoundedGapSet& s,
                        std::uint64_t n) {
  if (n < 1) throw ConfigError("miss_probability: N must be >= 1");
  KahanSum log_miss;
  for (auto i : s.materialize(n)) {
    const double p = profile.prob_at(i);
    if (p >= 1.0) return 0.0;
    log_miss.add(std::log1p(-p));
  }
  return std::exp(log_miss.value());
}

double expected_ap_count(const ProbabilityProfile& profile, int l, std::uint64_t n,
                         std::uint64_t exactness_cap) {
  if (l < 2) throw ConfigError("expected_ap_count: l must be >= 2");
  if (n < 3) throw ConfigError("expected_ap_count: N must be >= 3");
  if (n > exactness_cap)
    throw NumericError("expected_ap_count: N above the exactness cap");
  std::vector<double> p(n + 1);
  for (std::uint64_t k = 1; k <= n; ++k) p[k] = profile.prob_at(k);
  KahanSum sum;
  const auto ul = static_cast<std::uint64_t>(l);
  for (std::uint64_t d = 1; ul * d < n; ++d) {
    for (std::uint64_t i = 1; i + ul * d <= n; ++i) {
      double term = p[i];
      for (std::uint64_t k = 1; k <= ul && term != 0.0; ++k) term *= p[i + k * d];
      sum.add(term);
    }
  }
  return sum.value();
}

double expected_block_events(const ProbabilityProfile& profile, int l,
                             std::uint64_t k_max) {
  if (l < 3) throw ConfigError("expected_block_events: l must be >= 3");
  KahanSum sum;
  const auto ul = static_cast<std::uint64_t>(l);
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    double term = 1.0;
    for (std::uint64_t i = 1; i <= ul && term != 0.0; ++i)
      term *= profile.prob_at(i + k * ul);
    sum.add(term);
  }
  return sum.value();
}

}  // namespace bset
