#include "bset/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bset/errors.hpp"
#include "bset/quadrature.hpp"

namespace bset {

AdmissibleFunction AdmissibleFunction::constant(double c) {
  if (!(c >= 1.0)) throw ConfigError("constant admissible function needs c >= 1");
  return AdmissibleFunction(Kind::Constant, {c});
}

AdmissibleFunction AdmissibleFunction::log_shift() {
  return AdmissibleFunction(Kind::LogShift, {});
}

AdmissibleFunction AdmissibleFunction::log_power(double beta) {
  if (!(beta > 0.0)) throw ConfigError("log_power needs beta > 0");
  return AdmissibleFunction(Kind::LogPower, {beta});
}

AdmissibleFunction AdmissibleFunction::iterated_log() {
  return AdmissibleFunction(Kind::IteratedLog, {});
}

AdmissibleFunction AdmissibleFunction::table(std::vector<double> breaks,
                                             std::vector<double> values) {
  if (breaks.empty() || breaks.size() != values.size())
    throw ConfigError("table function needs matching non-empty breaks/values");
  if (!(breaks.front() <= 1.0))
    throw ConfigError("table function must cover x = 1 (first break <= 1)");
  if (!std::is_sorted(breaks.begin(), breaks.end()))
    throw ConfigError("table breaks must be sorted");
  AdmissibleFunction f(Kind::Table, {});
  f.table_breaks_ = std::move(breaks);
  f.table_values_ = std::move(values);
  try {
    f.validate_on_grid();
  } catch (const NumericError& e) {
    // Bad table data is a configuration problem, not a runtime failure.
    throw ConfigError(e.what());
  }
  return f;
}

void AdmissibleFunction::validate_on_grid() const {
  double prev = 1.0;
  for (double x = 1.0; x <= 1e12; x *= 2.0) {
    const double v = (*this)(x);
    if (v < prev)
      throw ConfigError("admissible function must be non-decreasing");
    prev = v;
  }
}

double AdmissibleFunction::operator()(double x) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::Constant:
      v = params_[0];
      break;
    case Kind::LogShift:
      v = std::log(std::exp(1.0) + x);
      break;
    case Kind::LogPower:
      v = std::pow(std::log(std::exp(1.0) + x), params_[0]);
      break;
    case Kind::IteratedLog:
      v = std::log(std::exp(1.0) + std::log(std::exp(1.0) + x));
      break;
    case Kind::Table: {
      auto it = std::upper_bound(table_breaks_.begin(), table_breaks_.end(), x);
      const auto idx = it == table_breaks_.begin()
                           ? std::size_t{0}
                           : static_cast<std::size_t>(it - table_breaks_.begin() - 1);
      v = table_values_[idx];
      break;
    }
  }
  if (!(v >= 1.0)) throw NumericError("admissible function evaluated below 1");
  return v;
}

nlohmann::json AdmissibleFunction::to_json() const {
  switch (kind_) {
    case Kind::Constant:
      return {{"kind", "constant"}, {"c", params_[0]}};
    case Kind::LogShift:
      return {{"kind", "log_shift"}};
    case Kind::LogPower:
      return {{"kind", "log_power"}, {"beta", params_[0]}};
    case Kind::IteratedLog:
      return {{"kind", "iterated_log"}};
    case Kind::Table:
      return {{"kind", "table"},
              {"breaks", table_breaks_},
              {"values", table_values_}};
  }
  throw NumericError("unreachable");
}

AdmissibleFunction AdmissibleFunction::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("admissible function spec needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return constant(j.at("c").get<double>());
    if (kind == "log_shift") return log_shift();
    if (kind == "log_power") return log_power(j.at("beta").get<double>());
    if (kind == "iterated_log") return iterated_log();
    if (kind == "table")
      return table(j.at("breaks").get<std::vector<double>>(),
                   j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad admissible function spec: ") + e.what());
  }
  throw ConfigError("unknown admissible function kind: " + kind);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Diverges: return "diverges";
    case Verdict::Converges: return "converges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ConvergenceVerdict classify_partial_sums(
    std::vector<std::pair<std::uint64_t, double>> partials,
    const ConvergenceThresholds& th) {
  ConvergenceVerdict out;
  out.partial_sum_at_cutoffs = std::move(partials);
  const auto& pts = out.partial_sum_at_cutoffs;
  if (pts.size() < 3) return out;

  // Least-squares slope of value against log(cutoff).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [cutoff, value] : pts) {
    const double x = std::log(static_cast<double>(cutoff));
    sx += x; sy += value; sxx += x * x; sxy += x * value;
  }
  const double n = static_cast<double>(pts.size());
  out.growth_exponent_estimate = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const double d_last = pts[pts.size() - 1].second - pts[pts.size() - 2].second;
  const double d_prev = pts[pts.size() - 2].second - pts[pts.size() - 3].second;
  if (d_last <= th.absolute_tail) {
    out.verdict = Verdict::Converges;
  } else if (d_prev > 0.0) {
    const double ratio = d_last / d_prev;
    if (ratio <= th.convergence_ratio)
      out.verdict = Verdict::Converges;
    else if (d_last >= th.divergence_floor && ratio >= th.divergence_ratio)
      out.verdict = Verdict::Diverges;
  }
  return out;
}

namespace {

// Partial integrals of 1/(x f(x)^q) at each cutoff, via x = e^t.
std::vector<std::pair<std::uint64_t, double>> partial_integrals(
    const AdmissibleFunction& f, double q,
    const std::vector<std::uint64_t>& cutoffs) {
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(cutoffs.size());
  auto integrand = [&f, q](double t) {
    return 1.0 / std::pow(f(std::exp(t)), q);
  };
  double acc = 0.0;
  double t_lo = 0.0;
  for (const auto cutoff : cutoffs) {
    const double t_hi = std::log(static_cast<double>(cutoff));
    acc += integrate(integrand, t_lo, t_hi, 1e-12);
    out.emplace_back(cutoff, acc);
    t_lo = t_hi;
  }
  return out;
}

}  // namespace

AdmissibilityReport check_admissibility(const AdmissibleFunction& f,
                                        const std::vector<double>& epsilons,
                                        const std::vector<std::uint64_t>& cutoffs,
                                        const ConvergenceThresholds& thresholds) {
  if (epsilons.empty()) throw ConfigError("check_admissibility: empty epsilon list");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("check_admissibility: epsilons must be > 0");
  if (cutoffs.size() < 3 || !std::is_sorted(cutoffs.begin(), cutoffs.end()) ||
      std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end())
    throw ConfigError("check_admissibility: cutoffs must be strictly increasing");
  if (cutoffs.back() < 1000000)
    throw ConfigError("check_admissibility: last cutoff must be >= 10^6");

  AdmissibilityReport report;
  report.first_integral =
      classify_partial_sums(partial_integrals(f, 1.0, cutoffs), thresholds);
  bool all_converge = true;
  for (double eps : epsilons) {
    auto verdict = classify_partial_sums(
        partial_integrals(f, 1.0 + eps, cutoffs), thresholds);
    all_converge = all_converge && verdict.verdict == Verdict::Converges;
    report.second_integral_per_epsilon.emplace_back(eps, std::move(verdict));
  }
  report.admissible_diagnosis =
      report.first_integral.verdict == Verdict::Diverges && all_converge;
  return report;
}

double block_integral(const AdmissibleFunction& f, double a, int n,
                      double rel_tol) {
  if (!(a > 1.0)) throw ConfigError("block_integral: base a must be > 1");
  if (n < 0) throw ConfigError("block_integral: n must be non-negative");
  const double log_a = std::log(a);
  if ((n + 1) * log_a >= std::log(std::numeric_limits<double>::max()))
    throw NumericError("block_integral: a^(n+1) overflows double range");
  auto integrand = [&f](double t) { return 1.0 / f(std::exp(t)); };
  return integrate(integrand, n * log_a, (n + 1) * log_a, rel_tol);
}

}  // namespace bset
