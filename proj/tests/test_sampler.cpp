#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <deque>
#include <sstream>

#include <bset/profile.hpp>
#include <bset/realization.hpp>
#include <bset/rng.hpp>
#include <bset/sampler.hpp>

using namespace bset;

namespace {

std::vector<ProbabilityProfile> oracle_profiles() {
  std::vector<ProbabilityProfile> profiles;
  profiles.push_back(ProbabilityProfile::admissible_power(
      AdmissibleFunction::log_shift(), 1.0));
  profiles.push_back(ProbabilityProfile::admissible_power(
      AdmissibleFunction::log_shift(), 0.5));
  profiles.push_back(ProbabilityProfile::sub_exponential(0.5, 0.5));
  profiles.push_back(ProbabilityProfile::power_law(1.0, 0.6));
  profiles.push_back(ProbabilityProfile::power_law(3.0, 0.5));  // clamped head
  profiles.push_back(ProbabilityProfile::constant(0.3));
  profiles.push_back(ProbabilityProfile::constant(0.0));
  profiles.push_back(ProbabilityProfile::table({1.0, 0.0, 0.5, 0.25, 0.75}));
  profiles.push_back(ProbabilityProfile::masked(
      ProbabilityProfile::constant(0.5),
      BoundedGapSet::arithmetic_progression(1, 2)));
  return profiles;
}

}  // namespace

TEST_CASE("skip transform worked examples") {
  // Constant 0.5, u=0.3: 0.5 > 0.3 but 0.25 <= 0.3, so the jump lands on 2.
  const auto half = ProbabilityProfile::constant(0.5);
  SurvivalCache cache_half(half, 100);
  CHECK(skip_next(cache_half, 0, 0.3, 100) == 2);
  CHECK(skip_oracle(half, 0, 0.3, 100) == 2);

  // p_k = 1/k: the survival product from 2 to m telescopes to 1/m, and the
  // smallest m with 1/m <= 0.26 is 4. (u = 0.26 rather than the exact tie
  // u = 1/4: the telescoped log-sum lands 1 ulp away from log(1/4), so the
  // tie is decided by rounding, consistently in both paths.)
  std::vector<double> recip;
  for (int k = 1; k <= 100; ++k) recip.push_back(1.0 / k);
  const auto harmonic = ProbabilityProfile::table(recip);
  SurvivalCache cache_h(harmonic, 100);
  CHECK(skip_next(cache_h, 1, 0.26, 100) == 4);
  CHECK(skip_oracle(harmonic, 1, 0.26, 100) == 4);
  CHECK(skip_next(cache_h, 1, 0.25, 100) ==
        skip_oracle(harmonic, 1, 0.25, 100));

  // u = 0 forces the first index with positive probability.
  const auto gaps = ProbabilityProfile::table({0.0, 0.0, 0.4});
  SurvivalCache cache_g(gaps, 10);
  CHECK(skip_next(cache_g, 0, 0.0, 10) == 3);
  CHECK(skip_oracle(gaps, 0, 0.0, 10) == 3);

  // Constant 0: the survival product stays 1, never reaching any u < 1.
  const auto never = ProbabilityProfile::constant(0.0);
  SurvivalCache cache_n(never, 1000);
  CHECK_FALSE(skip_next(cache_n, 0, 0.7, 1000).has_value());
  CHECK_FALSE(skip_oracle(never, 0, 0.7, 1000).has_value());
}

TEST_CASE("skip fast path equals the linear-scan oracle on randomized cases") {
  const auto profiles = oracle_profiles();
  RngStream meta(12345);
  const std::uint64_t n = 5000;
  std::deque<SurvivalCache> caches;
  for (const auto& p : profiles) caches.emplace_back(p, n);
  int checked = 0;
  for (int iter = 0; iter < 10000; ++iter) {
    const std::size_t pi = meta.next_u64() % profiles.size();
    const std::uint64_t current = meta.next_u64() % n;
    double u = meta.next_uniform();
    if (iter % 97 == 0) u = 0.0;       // boundary case
    if (iter % 101 == 0) u = 1e-300;   // deep-tail threshold
    const auto fast = skip_next(caches[pi], current, u, n);
    const auto slow = skip_oracle(profiles[pi], current, u, n);
    REQUIRE(fast == slow);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("naive sampler degenerate profiles") {
  RngStream rng(7);
  const auto all = sample_naive(ProbabilityProfile::constant(1.0), 5, rng);
  CHECK(all.indices == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  const auto none = sample_naive(ProbabilityProfile::constant(0.0), 100, rng);
  CHECK(none.indices.empty());
}

TEST_CASE("skip sampler handles certain-success prefixes") {
  // p_1 = p_2 = 1 must be emitted without consuming uniforms.
  const auto prof = ProbabilityProfile::table({1.0, 1.0, 0.5, 0.5, 0.5});
  RngStream rng(3);
  const auto r = sample_skip(prof, 5, rng);
  REQUIRE(r.indices.size() >= 2);
  CHECK(r.indices[0] == 1);
  CHECK(r.indices[1] == 2);
}

TEST_CASE("determinism: same seed, same realization") {
  const auto prof = ProbabilityProfile::power_law(1.0, 0.6);
  for (const auto kind : {SamplerKind::Naive, SamplerKind::Skip}) {
    const auto a = sample(prof, kind, 20000, 42);
    const auto b = sample(prof, kind, 20000, 42);
    CHECK(a.indices == b.indices);
    const auto c = sample(prof, kind, 20000, 43);
    CHECK(a.indices != c.indices);
  }
  // A shared cache must not change the output.
  SurvivalCache cache(prof, 20000);
  const auto with_cache = sample(prof, SamplerKind::Skip, 20000, 42, &cache);
  CHECK(with_cache.indices == sample(prof, SamplerKind::Skip, 20000, 42).indices);
}

TEST_CASE("distributional agreement between samplers") {
  const auto prof = ProbabilityProfile::constant(0.3);
  const std::uint64_t n = 200;
  const int trials = 100000;
  std::vector<std::uint64_t> freq_naive(n + 1, 0), freq_skip(n + 1, 0);
  std::vector<double> sizes_naive, sizes_skip;
  for (int t = 0; t < trials; ++t) {
    RngStream r1(substream_seed(1, t)), r2(substream_seed(2, t));
    const auto a = sample_naive(prof, n, r1);
    const auto b = sample_skip(prof, n, r2);
    for (auto k : a.indices) ++freq_naive[k];
    for (auto k : b.indices) ++freq_skip[k];
    sizes_naive.push_back(static_cast<double>(a.indices.size()));
    sizes_skip.push_back(static_cast<double>(b.indices.size()));
  }
  const double se = std::sqrt(0.3 * 0.7 / trials);
  for (std::uint64_t k = 1; k <= n; ++k) {
    CHECK(std::abs(freq_naive[k] / double(trials) - 0.3) <= 4 * se);
    CHECK(std::abs(freq_skip[k] / double(trials) - 0.3) <= 4 * se);
  }
  // Mean realization size: Binomial(200, 0.3), sd = sqrt(200*0.21).
  auto mean = [&](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  const double size_se = std::sqrt(200 * 0.21 / trials);
  CHECK(std::abs(mean(sizes_naive) - 60.0) <= 4 * size_se);
  CHECK(std::abs(mean(sizes_skip) - 60.0) <= 4 * size_se);
}

TEST_CASE("adjacent-index inclusions are uncorrelated") {
  const auto prof = ProbabilityProfile::constant(0.5);
  const int trials = 100000;
  std::uint64_t both = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(substream_seed(9, t));
    const auto r = sample_naive(prof, 2, rng);
    if (r.indices.size() == 2) ++both;
  }
  // P[1 in E and 2 in E] = 0.25 under independence.
  const double se = std::sqrt(0.25 * 0.75 / trials);
  CHECK(std::abs(both / double(trials) - 0.25) <= 4 * se);
}

TEST_CASE("realization serialization round trip") {
  const auto prof = ProbabilityProfile::power_law(1.0, 0.6);
  const auto r = sample(prof, SamplerKind::Skip, 5000, 11);
  for (const auto fmt : {RealizationFormat::Text, RealizationFormat::Binary}) {
    std::stringstream ss;
    write_realization(ss, r, fmt);
    const auto back = read_realization(ss);
    CHECK(back.indices == r.indices);
    CHECK(back.range_end == r.range_end);
    CHECK(back.profile_digest == r.profile_digest);
    CHECK(back.seed == r.seed);
    CHECK(back.sampler_kind == r.sampler_kind);
  }
  // Corrupt input must be rejected.
  std::stringstream bad("{\"schema_version\":1,\"count\":2}\n5\n3\n");
  CHECK_THROWS(read_realization(bad));
}
