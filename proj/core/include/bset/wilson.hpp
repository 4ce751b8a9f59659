#pragma once

#include <cmath>
#include <cstdint>

#include "bset/errors.hpp"

namespace bset {

// Wilson score interval for a binomial proportion.
struct ConfidenceInterval {
  double point = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double z = 1.96;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  bool contains(double v) const { return v >= lower && v <= upper; }
};

inline ConfidenceInterval wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials,
                                          double z = 1.96) {
  if (trials == 0 || successes > trials)
    throw ConfigError("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  ConfidenceInterval ci;
  ci.successes = successes;
  ci.trials = trials;
  ci.z = z;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  ci.point = p;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ci.lower = std::max(0.0, center - half);
  ci.upper = std::min(1.0, center + half);
  return ci;
}

}  // namespace bset
