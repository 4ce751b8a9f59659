#include "bset/bounded_gap_set.hpp"

#include <algorithm>

#include "bset/errors.hpp"

namespace bset {

BoundedGapSet BoundedGapSet::arithmetic_progression(std::uint64_t start,
                                                    std::uint64_t step) {
  if (start < 1 || step < 1)
    throw ConfigError("arithmetic progression needs start >= 1 and step >= 1");
  BoundedGapSet s(Kind::ArithmeticProgression);
  s.start_ = start;
  s.step_ = step;
  s.compute_gap_bound();
  return s;
}

BoundedGapSet BoundedGapSet::explicit_sorted(std::vector<std::uint64_t> elements) {
  if (elements.empty()) throw ConfigError("explicit set must be non-empty");
  if (elements.front() < 1) throw ConfigError("set elements must be >= 1");
  if (!std::is_sorted(elements.begin(), elements.end()) ||
      std::adjacent_find(elements.begin(), elements.end()) != elements.end())
    throw ConfigError("explicit set must be strictly increasing");
  BoundedGapSet s(Kind::ExplicitSorted);
  s.elements_ = std::move(elements);
  s.compute_gap_bound();
  return s;
}

BoundedGapSet BoundedGapSet::union_of_aps(
    std::vector<std::pair<std::uint64_t, std::uint64_t>> aps) {
  if (aps.empty()) throw ConfigError("union of APs must be non-empty");
  for (const auto& [start, step] : aps)
    if (start < 1 || step < 1)
      throw ConfigError("arithmetic progression needs start >= 1 and step >= 1");
  BoundedGapSet s(Kind::UnionOfAPs);
  s.aps_ = std::move(aps);
  s.compute_gap_bound();
  return s;
}

void BoundedGapSet::compute_gap_bound() {
  if (kind_ == Kind::ArithmeticProgression) {
    gap_bound_ = step_;
    return;
  }
  std::vector<std::uint64_t> sample;
  if (kind_ == Kind::ExplicitSorted) {
    sample = elements_;
  } else {
    // One full period past the largest start captures the steady-state gaps.
    std::uint64_t horizon = 1;
    for (const auto& [start, step] : aps_)
      horizon = std::max(horizon, start + 4 * step);
    sample = materialize(horizon);
  }
  gap_bound_ = 0;
  for (std::size_t i = 1; i < sample.size(); ++i)
    gap_bound_ = std::max(gap_bound_, sample[i] - sample[i - 1]);
  if (sample.size() < 2) gap_bound_ = 0;
}

bool BoundedGapSet::contains(std::uint64_t k) const {
  switch (kind_) {
    case Kind::ArithmeticProgression:
      return k >= start_ && (k - start_) % step_ == 0;
    case Kind::ExplicitSorted:
      return std::binary_search(elements_.begin(), elements_.end(), k);
    case Kind::UnionOfAPs:
      for (const auto& [start, step] : aps_)
        if (k >= start && (k - start) % step == 0) return true;
      return false;
  }
  return false;
}

std::vector<std::uint64_t> BoundedGapSet::materialize(std::uint64_t n) const {
  std::vector<std::uint64_t> out;
  switch (kind_) {
    case Kind::ArithmeticProgression:
      for (std::uint64_t k = start_; k <= n; k += step_) out.push_back(k);
      break;
    case Kind::ExplicitSorted:
      for (auto k : elements_) {
        if (k > n) break;
        out.push_back(k);
      }
      break;
    case Kind::UnionOfAPs: {
      for (const auto& [start, step] : aps_)
        for (std::uint64_t k = start; k <= n; k += step) out.push_back(k);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
  }
  return out;
}

nlohmann::json BoundedGapSet::to_json() const {
  switch (kind_) {
    case Kind::ArithmeticProgression:
      return {{"kind", "ap"}, {"start", start_}, {"step", step_}};
    case Kind::ExplicitSorted:
      return {{"kind", "explicit"}, {"elements", elements_}};
    case Kind::UnionOfAPs: {
      nlohmann::json aps = nlohmann::json::array();
      for (const auto& [start, step] : aps_)
        aps.push_back({{"start", start}, {"step", step}});
      return {{"kind", "union_of_aps"}, {"aps", aps}};
    }
  }
  throw NumericError("unreachable");
}

BoundedGapSet BoundedGapSet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("set spec needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "ap")
      return arithmetic_progression(j.at("start").get<std::uint64_t>(),
                                    j.at("step").get<std::uint64_t>());
    if (kind == "explicit")
      return explicit_sorted(j.at("elements").get<std::vector<std::uint64_t>>());
    if (kind == "union_of_aps") {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> aps;
      for (const auto& ap : j.at("aps"))
        aps.emplace_back(ap.at("start").get<std::uint64_t>(),
                         ap.at("step").get<std::uint64_t>());
      return union_of_aps(std::move(aps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad set spec: ") + e.what());
  }
  throw ConfigError("unknown set kind: " + kind);
}

}  // namespace bset
