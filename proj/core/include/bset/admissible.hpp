#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bset {

// Non-decreasing f : [1, inf) -> [1, inf). The enumerated kinds cover the
// shapes the convergence diagnostics care about; whether a given instance is
// actually admissible is judged numerically by check_admissibility.
class AdmissibleFunction {
 public:
  enum class Kind { Constant, LogShift, LogPower, IteratedLog, Table };

  static AdmissibleFunction constant(double c);
  static AdmissibleFunction log_shift();
  static AdmissibleFunction log_power(double beta);
  static AdmissibleFunction iterated_log();
  // Piecewise constant: value values[i] on [breaks[i], breaks[i+1]), and
  // values.back() from breaks.back() on. breaks[0] must be <= 1.
  static AdmissibleFunction table(std::vector<double> breaks,
                                  std::vector<double> values);

  // Throws NumericError if the result dips below 1 (invalid table data).
  double operator()(double x) const;

  Kind kind() const { return kind_; }
  nlohmann::json to_json() const;
  static AdmissibleFunction from_json(const nlohmann::json& j);

 private:
  AdmissibleFunction(Kind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}
  void validate_on_grid() const;

  Kind kind_;
  std::vector<double> params_;        // kind-specific scalars
  std::vector<double> table_breaks_;  // Table only
  std::vector<double> table_values_;
};

enum class Verdict { Diverges, Converges, Inconclusive };

std::string to_string(Verdict v);

struct ConvergenceVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<std::uint64_t, double>> partial_sum_at_cutoffs;
  double growth_exponent_estimate = 0.0;  // slope of partial sum vs log cutoff
};

// A numerical integral/sum cannot prove divergence; these thresholds turn the
// increment pattern across decade cutoffs into a diagnostic verdict.
struct ConvergenceThresholds {
  double divergence_floor = 1e-3;  // last increment at least this large
  double divergence_ratio = 0.85;  // and increment ratio at least this
  double convergence_ratio = 0.80; // increment ratio decaying below this
  double absolute_tail = 1e-8;     // or last increment already negligible
};

// Classifies a non-decreasing sequence of (cutoff, partial value) points.
ConvergenceVerdict classify_partial_sums(
    std::vector<std::pair<std::uint64_t, double>> partials,
    const ConvergenceThresholds& thresholds = {});

struct AdmissibilityReport {
  ConvergenceVerdict first_integral;  // integral of 1/(x f(x)), wants Diverges
  std::vector<std::pair<double, ConvergenceVerdict>>
      second_integral_per_epsilon;    // 1/(x f(x)^(1+eps)), wants Converges
  bool admissible_diagnosis = false;
};

// Integrates both defining integrals up to each cutoff and classifies the
// partial-integral trends. Requires strictly increasing cutoffs with the last
// one at least 10^6 and a non-empty epsilon list.
AdmissibilityReport check_admissibility(
    const AdmissibleFunction& f, const std::vector<double>& epsilons,
    const std::vector<std::uint64_t>& cutoffs,
    const ConvergenceThresholds& thresholds = {});

// Integral of 1/(x f(x)) over (a^n, a^(n+1)], computed to rel_tol on a
// log-substituted grid. Throws NumericError if a^(n+1) overflows.
double block_integral(const AdmissibleFunction& f, double a, int n,
                      double rel_tol = 1e-10);

}  // namespace bset
