#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

namespace bset {

// An increasing integer set with finite gap: an arithmetic progression, a
// finite explicit list, or a union of progressions. Serves both as the target
// set S for intersection statistics and as the mask of a masked profile.
class BoundedGapSet {
 public:
  enum class Kind { ArithmeticProgression, ExplicitSorted, UnionOfAPs };

  static BoundedGapSet arithmetic_progression(std::uint64_t start,
                                              std::uint64_t step);
  static BoundedGapSet explicit_sorted(std::vector<std::uint64_t> elements);
  static BoundedGapSet union_of_aps(
      std::vector<std::pair<std::uint64_t, std::uint64_t>> aps);

  bool contains(std::uint64_t k) const;
  // All members in [1, n], ascending.
  std::vector<std::uint64_t> materialize(std::uint64_t n) const;
  // Gap(S): sup of successive differences. The step for a single AP; computed
  // over a materialized horizon for unions and explicit lists.
  std::uint64_t gap_bound() const { return gap_bound_; }
  Kind kind() const { return kind_; }

  nlohmann::json to_json() const;
  static BoundedGapSet from_json(const nlohmann::json& j);

 private:
  explicit BoundedGapSet(Kind kind) : kind_(kind) {}
  void compute_gap_bound();

  Kind kind_;
  std::uint64_t start_ = 0, step_ = 0;
  std::vector<std::uint64_t> elements_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> aps_;
  std::uint64_t gap_bound_ = 0;
};

}  // namespace bset
