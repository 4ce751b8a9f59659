#include "bset/profile.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bset/errors.hpp"
#include "bset/kahan.hpp"

namespace bset {

ProbabilityProfile ProbabilityProfile::admissible_power(AdmissibleFunction f,
                                                        double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("admissible_power needs alpha in (0, 1]");
  ProbabilityProfile p(Kind::AdmissiblePower);
  p.alpha_ = alpha;
  p.f_ = std::make_shared<AdmissibleFunction>(std::move(f));
  return p;
}

ProbabilityProfile ProbabilityProfile::sub_exponential(double c, double eps,
                                                       double p1_clamp) {
  if (!(c > 0.0)) throw ConfigError("sub_exponential needs c > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw ConfigError("sub_exponential needs epsilon in (0, 1)");
  if (!(p1_clamp > 0.0 && p1_clamp <= 1.0))
    throw ConfigError("sub_exponential p1 clamp must be in (0, 1]");
  ProbabilityProfile p(Kind::SubExponential);
  p.c_ = c;
  p.eps_ = eps;
  p.p_ = p1_clamp;
  return p;
}

ProbabilityProfile ProbabilityProfile::power_law(double big_c, double alpha) {
  if (!(big_c > 0.0)) throw ConfigError("power_law needs C > 0");
  if (!(alpha > 0.0)) throw ConfigError("power_law needs alpha > 0");
  ProbabilityProfile p(Kind::PowerLaw);
  p.c_ = big_c;
  p.alpha_ = alpha;
  return p;
}

ProbabilityProfile ProbabilityProfile::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("constant profile needs p in [0, 1]");
  ProbabilityProfile prof(Kind::Constant);
  prof.p_ = p;
  return prof;
}

ProbabilityProfile ProbabilityProfile::table(std::vector<double> probs) {
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("table profile entries must be in [0, 1]");
  ProbabilityProfile prof(Kind::Table);
  prof.table_ = std::move(probs);
  return prof;
}

ProbabilityProfile ProbabilityProfile::masked(ProbabilityProfile base,
                                              BoundedGapSet mask) {
  if (base.kind_ == Kind::Masked)
    throw ConfigError("masked profiles do not nest");
  ProbabilityProfile prof(Kind::Masked);
  prof.base_ = std::make_shared<ProbabilityProfile>(std::move(base));
  prof.mask_ = std::make_shared<BoundedGapSet>(std::move(mask));
  return prof;
}

double ProbabilityProfile::prob_at(std::uint64_t k) const {
  if (k == 0) throw ConfigError("prob_at: index k must be >= 1");
  switch (kind_) {
    case Kind::AdmissiblePower: {
      const double x = static_cast<double>(k);
      return 1.0 / (x * std::pow((*f_)(x), alpha_));
    }
    case Kind::SubExponential: {
      if (k == 1) return p_;
      return std::exp(-c_ * std::pow(std::log(static_cast<double>(k)), eps_));
    }
    case Kind::PowerLaw:
      return std::min(1.0, c_ * std::pow(static_cast<double>(k), -alpha_));
    case Kind::Constant:
      return p_;
    case Kind::Table:
      return k <= table_.size() ? table_[k - 1] : 0.0;
    case Kind::Masked:
      return mask_->contains(k) ? base_->prob_at(k) : 0.0;
  }
  throw NumericError("unreachable");
}

double ProbabilityProfile::log_survival_at(std::uint64_t k) const {
  const double p = prob_at(k);
  if (p >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::log1p(-p);
}

nlohmann::json ProbabilityProfile::to_json() const {
  switch (kind_) {
    case Kind::AdmissiblePower:
      return {{"kind", "admissible_power"}, {"alpha", alpha_}, {"f", f_->to_json()}};
    case Kind::SubExponential:
      return {{"kind", "subexp"}, {"c", c_}, {"epsilon", eps_}, {"p1", p_}};
    case Kind::PowerLaw:
      return {{"kind", "power_law"}, {"C", c_}, {"alpha", alpha_}};
    case Kind::Constant:
      return {{"kind", "constant"}, {"p", p_}};
    case Kind::Table:
      return {{"kind", "table"}, {"probs", table_}};
    case Kind::Masked:
      return {{"kind", "masked"}, {"base", base_->to_json()}, {"mask", mask_->to_json()}};
  }
  throw NumericError("unreachable");
}

ProbabilityProfile ProbabilityProfile::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("profile spec needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "admissible_power")
      return admissible_power(AdmissibleFunction::from_json(j.at("f")),
                              j.at("alpha").get<double>());
    if (kind == "subexp")
      return sub_exponential(j.at("c").get<double>(), j.at("epsilon").get<double>(),
                             j.value("p1", 0.5));
    if (kind == "power_law")
      return power_law(j.at("C").get<double>(), j.at("alpha").get<double>());
    if (kind == "constant") return constant(j.at("p").get<double>());
    if (kind == "table") return table(j.at("probs").get<std::vector<double>>());
    if (kind == "masked")
      return masked(from_json(j.at("base")), BoundedGapSet::from_json(j.at("mask")));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad profile spec: ") + e.what());
  }
  throw ConfigError("unknown profile kind: " + kind);
}

std::uint64_t ProbabilityProfile::digest() const {
  const std::string canonical = to_json().dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

SeriesSum series_sum(const ProbabilityProfile& profile, int power,
                     std::uint64_t n, const ConvergenceThresholds& thresholds) {
  if (power != 1 && power != 2) throw ConfigError("series_sum: power must be 1 or 2");
  if (n < 1) throw ConfigError("series_sum: N must be >= 1");
  KahanSum sum;
  std::vector<std::pair<std::uint64_t, double>> partials;
  std::uint64_t next_cutoff = 10;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double p = profile.prob_at(k);
    sum.add(power == 1 ? p : p * p);
    if (k == next_cutoff && k != n) {
      partials.emplace_back(k, sum.value());
      next_cutoff *= 10;
    }
  }
  partials.emplace_back(n, sum.value());
  SeriesSum out;
  out.value = sum.value();
  out.verdict = classify_partial_sums(std::move(partials), thresholds);
  return out;
}

}  // namespace bset
