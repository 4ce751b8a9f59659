#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bset/admissible.hpp"
#include "bset/bounded_gap_set.hpp"

namespace bset {

// Immutable law (p_k) of the independent inclusion indicators. Evaluation is
// pure: the same k always yields the same p_k, which the samplers, the exact
// oracles and the chunk cache all rely on.
class ProbabilityProfile {
 public:
  enum class Kind {
    AdmissiblePower,  // p_k = 1 / (k f(k)^alpha), alpha in (0,1]
    SubExponential,   // p_k = exp(-c (log k)^eps), p_1 clamped
    PowerLaw,         // p_k = min(1, C k^-alpha)
    Constant,
    Table,            // explicit list, 0 beyond its end
    Masked            // base profile restricted to a bounded-gap set
  };

  static ProbabilityProfile admissible_power(AdmissibleFunction f, double alpha);
  // (log 1)^eps = 0 would force p_1 = 1; the first index is clamped instead.
  static ProbabilityProfile sub_exponential(double c, double eps,
                                            double p1_clamp = 0.5);
  static ProbabilityProfile power_law(double big_c, double alpha);
  static ProbabilityProfile constant(double p);
  static ProbabilityProfile table(std::vector<double> probs);
  static ProbabilityProfile masked(ProbabilityProfile base, BoundedGapSet mask);

  // p_k. Throws ConfigError for k = 0.
  double prob_at(std::uint64_t k) const;
  // log(1 - p_k); -infinity when p_k = 1.
  double log_survival_at(std::uint64_t k) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  // The f of an AdmissiblePower profile; nullptr for other kinds.
  const AdmissibleFunction* admissible_f() const { return f_.get(); }

  nlohmann::json to_json() const;
  static ProbabilityProfile from_json(const nlohmann::json& j);
  // FNV-1a over the canonical JSON serialization; keys realization files and
  // survival-prefix caches to the generating law.
  std::uint64_t digest() const;

 private:
  explicit ProbabilityProfile(Kind kind) : kind_(kind) {}

  Kind kind_;
  double alpha_ = 0.0;   // AdmissiblePower / PowerLaw exponent
  double c_ = 0.0;       // SubExponential rate or PowerLaw scale
  double eps_ = 0.0;
  double p_ = 0.0;       // Constant value or SubExponential p_1 clamp
  std::shared_ptr<const AdmissibleFunction> f_;
  std::vector<double> table_;
  std::shared_ptr<const ProbabilityProfile> base_;
  std::shared_ptr<const BoundedGapSet> mask_;
};

// Sum of p_k^power for k = 1..n (compensated), with the partial sums at
// decade cutoffs classified by the usual trend heuristics.
struct SeriesSum {
  double value = 0.0;
  ConvergenceVerdict verdict;
};
SeriesSum series_sum(const ProbabilityProfile& profile, int power,
                     std::uint64_t n, const ConvergenceThresholds& thresholds = {});

}  // namespace bset
