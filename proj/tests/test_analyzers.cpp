#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <bset/analyzers.hpp>
#include <bset/bounded_gap_set.hpp>
#include <bset/errors.hpp>
#include <bset/realization.hpp>
#include <bset/rng.hpp>

using namespace bset;

namespace {

Realization make_r(std::vector<std::uint64_t> indices, std::uint64_t n) {
  Realization r;
  r.indices = std::move(indices);
  r.range_end = n;
  return r;
}

// Brute-force l-term AP count: try every (start, step) pair directly.
std::uint64_t brute_ap_count(const std::vector<std::uint64_t>& e, int l) {
  std::uint64_t count = 0;
  if (e.empty()) return 0;
  const std::uint64_t max = e.back();
  for (std::uint64_t i = 1; i <= max; ++i)
    for (std::uint64_t d = 1; i + (l - 1) * d <= max; ++d) {
      bool all = true;
      for (int j = 0; j < l && all; ++j)
        all = std::binary_search(e.begin(), e.end(), i + j * d);
      if (all) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("block bounds and counts") {
  CHECK(block_bounds(2.0, 1) == std::pair<std::uint64_t, std::uint64_t>{2, 4});
  CHECK(block_bounds(2.0, 4) == std::pair<std::uint64_t, std::uint64_t>{16, 32});
  CHECK_THROWS_AS(block_bounds(2.0, 80), NumericError);

  const auto bc = block_counts(make_r({3, 5, 20}, 40), 2.0, 1, 4);
  CHECK(bc.counts == std::vector<std::uint64_t>{1, 1, 0, 1});
  CHECK(bc.block_lengths == std::vector<std::uint64_t>{2, 4, 8, 16});

  CHECK(block_counts(make_r({}, 40), 2.0, 1, 4).counts ==
        std::vector<std::uint64_t>{0, 0, 0, 0});

  std::vector<std::uint64_t> full(32);
  for (std::uint64_t k = 1; k <= 32; ++k) full[k - 1] = k;
  const auto fc = block_counts(make_r(full, 32), 2.0, 1, 4);
  CHECK(fc.counts == std::vector<std::uint64_t>{2, 4, 8, 16});
  CHECK(fc.counts == fc.block_lengths);

  CHECK_THROWS(block_counts(make_r({1}, 10), 2.0, 1, 10));
}

TEST_CASE("block counts agree with a linear scan on random realizations") {
  RngStream rng(555);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<std::uint64_t> e;
    for (std::uint64_t k = 1; k <= 300; ++k)
      if (rng.next_uniform() < 0.2) e.push_back(k);
    const auto bc = block_counts(make_r(e, 300), 2.0, 0, 7);
    for (int n = 0; n <= 7; ++n) {
      const auto [lo, hi] = block_bounds(2.0, n);
      std::uint64_t direct = 0;
      for (auto k : e) direct += (k > lo && k <= hi);
      REQUIRE(bc.counts[n] == direct);
    }
  }
}

TEST_CASE("gap statistics") {
  const GapStats gs(std::vector<std::uint64_t>{2, 5, 11, 30});
  CHECK(gs.gaps() == std::vector<std::uint64_t>{3, 6, 19});
  CHECK(gs.tail_min_gap(2) == 6);
  CHECK(gs.tail_min_gap(10) == 3);
  CHECK(GapStats(std::vector<std::uint64_t>{1, 2}).gaps() ==
        std::vector<std::uint64_t>{1});
  CHECK(GapStats(std::vector<std::uint64_t>{7}).gaps().empty());
  CHECK_FALSE(GapStats(std::vector<std::uint64_t>{7}).tail_min_gap(3).has_value());

  const GapStats ev(std::vector<std::uint64_t>{2, 4, 6});
  CHECK(ev.pair_coincidences(2) == 2);
  CHECK(ev.pair_coincidences(1) == 0);
}

TEST_CASE("lacunarity statistics") {
  const auto r = make_r({2, 5, 11, 30}, 40);
  const auto bc = block_counts(r, 2.0, 1, 4);
  const auto ls = lacunarity_stats(r, bc);
  REQUIRE(ls.ratios.size() == 3);
  CHECK(ls.ratios[0] == doctest::Approx(2.5));
  CHECK(ls.ratios[1] == doctest::Approx(2.2));
  CHECK(ls.ratios[2] == doctest::Approx(30.0 / 11.0));
  CHECK(ls.tail_inf(3) == doctest::Approx(2.2));
  // Blocks (2,4],(4,8],(8,16],(16,32]: 2 itself is excluded from (2,4], so
  // the counts are 0,1,1,1.
  CHECK(ls.adjacent_block_products == std::vector<std::uint64_t>{0, 1, 1});
}

TEST_CASE("find_aps frozen examples") {
  // {1,2,3,5,7,9}: (1,2,3),(1,3,5),(3,5,7),(5,7,9),(1,5,9).
  CHECK(find_aps(make_r({1, 2, 3, 5, 7, 9}, 9), 3).count == 5);
  // First five powers of two contain no 3-term AP.
  CHECK(find_aps(make_r({1, 2, 4, 8, 16}, 16), 3).count == 0);
  // Full interval [1,10]: sum over steps d=1..4 of (10 - 2d) = 20, confirmed
  // by the brute-force oracle.
  std::vector<std::uint64_t> full;
  for (std::uint64_t k = 1; k <= 10; ++k) full.push_back(k);
  CHECK(brute_ap_count(full, 3) == 20);
  CHECK(find_aps(make_r(full, 10), 3).count == 20);
  CHECK_THROWS_AS(find_aps(make_r({1, 2, 3}, 3), 2), ConfigError);
}

TEST_CASE("find_aps equals brute force on every small subset of [1,12]") {
  // All subsets of {1..12} with at most 6 elements.
  for (unsigned mask = 0; mask < (1u << 12); ++mask) {
    if (__builtin_popcount(mask) > 6) continue;
    std::vector<std::uint64_t> e;
    for (int b = 0; b < 12; ++b)
      if (mask & (1u << b)) e.push_back(b + 1);
    const auto report = find_aps(make_r(e, 12), 3);
    REQUIRE(report.count == brute_ap_count(e, 3));
    for (const auto& [i, d] : report.instances)
      for (int j = 0; j < 3; ++j)
        REQUIRE(std::binary_search(e.begin(), e.end(), i + j * d));
  }
}

TEST_CASE("find_aps instance cap keeps counting") {
  std::vector<std::uint64_t> full;
  for (std::uint64_t k = 1; k <= 50; ++k) full.push_back(k);
  const auto capped = find_aps(make_r(full, 50), 3, 10);
  CHECK(capped.truncated);
  CHECK(capped.instances.size() == 10);
  CHECK(capped.count == brute_ap_count(full, 3));
}

TEST_CASE("ap_block_events") {
  std::vector<std::uint64_t> full;
  for (std::uint64_t k = 1; k <= 12; ++k) full.push_back(k);
  CHECK(ap_block_events(make_r(full, 12), 3, 3) ==
        std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(ap_block_events(make_r({1, 2, 3}, 9), 3, 2) ==
        std::vector<std::uint64_t>{0});
  CHECK(ap_block_events(make_r({}, 9), 3, 2).empty());
}

TEST_CASE("bounded gap sets and intersections") {
  const auto evens = BoundedGapSet::arithmetic_progression(2, 2);
  CHECK(evens.gap_bound() == 2);
  CHECK(evens.contains(4));
  CHECK_FALSE(evens.contains(5));
  CHECK(evens.materialize(9) == std::vector<std::uint64_t>{2, 4, 6, 8});

  const auto expl = BoundedGapSet::explicit_sorted({3, 5, 9});
  CHECK(expl.gap_bound() == 4);

  const auto uni = BoundedGapSet::union_of_aps({{1, 3}, {2, 3}});
  CHECK(uni.contains(4));
  CHECK(uni.contains(5));
  CHECK_FALSE(uni.contains(3));

  const auto round = BoundedGapSet::from_json(evens.to_json());
  CHECK(round.to_json() == evens.to_json());

  CHECK(intersect_bounded_gap(make_r({2, 5, 11}, 11), evens).nonempty);
  CHECK(intersect_bounded_gap(make_r({2, 5, 11}, 11), evens).first_hit == 2);
  CHECK_FALSE(intersect_bounded_gap(make_r({1, 3, 5}, 5), evens).nonempty);
  CHECK_FALSE(intersect_bounded_gap(make_r({}, 5), evens).nonempty);
}

TEST_CASE("analyzer counts are monotone under range extension") {
  RngStream rng(99);
  std::vector<std::uint64_t> e;
  for (std::uint64_t k = 1; k <= 400; ++k)
    if (rng.next_uniform() < 0.25) e.push_back(k);
  std::vector<std::uint64_t> half;
  for (auto k : e)
    if (k <= 200) half.push_back(k);
  CHECK(find_aps(make_r(half, 200), 3).count <=
        find_aps(make_r(e, 400), 3).count);
  CHECK(half.size() <= e.size());
}

TEST_CASE("CSV emitters") {
  const auto r = make_r({2, 5, 11, 30}, 40);
  const auto bc = block_counts(r, 2.0, 1, 4);
  std::ostringstream blocks;
  write_block_counts_csv(blocks, bc);
  CHECK(blocks.str().substr(0, blocks.str().find('\n')) ==
        "n,N_n,L_n,product_with_next");

  std::ostringstream gaps;
  write_gaps_csv(gaps, gap_sequence(r));
  CHECK(gaps.str().substr(0, gaps.str().find('\n')) == "k,n_k,gap,ratio");

  std::ostringstream aps;
  write_aps_csv(aps, find_aps(make_r({1, 2, 3}, 3), 3));
  CHECK(aps.str().substr(0, aps.str().find('\n')) == "i,d,l");
  CHECK(aps.str().find("1,1,3") != std::string::npos);
}
