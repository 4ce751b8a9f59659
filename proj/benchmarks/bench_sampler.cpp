#include <benchmark/benchmark.h>

#include <bset/exact.hpp>
#include <bset/profile.hpp>
#include <bset/rng.hpp>
#include <bset/sampler.hpp>

namespace {

bset::ProbabilityProfile sparse_profile() {
  return bset::ProbabilityProfile::power_law(1.0, 0.6);
}

void BM_SampleNaive(benchmark::State& state) {
  const auto profile = sparse_profile();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    bset::RngStream rng(bset::substream_seed(1, seed++));
    benchmark::DoNotOptimize(bset::sample_naive(profile, n, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleNaive)->Range(1 << 12, 1 << 20);

void BM_SampleSkip(benchmark::State& state) {
  const auto profile = sparse_profile();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  bset::SurvivalCache cache(profile, n);
  cache.prefix(n);  // pre-build so the loop measures the jump path alone
  std::uint64_t seed = 0;
  for (auto _ : state) {
    bset::RngStream rng(bset::substream_seed(1, seed++));
    benchmark::DoNotOptimize(bset::sample_skip(profile, n, rng, 0, &cache));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleSkip)->Range(1 << 12, 1 << 24);

void BM_BlockDistribution(benchmark::State& state) {
  const auto profile = bset::ProbabilityProfile::admissible_power(
      bset::AdmissibleFunction::log_shift(), 1.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bset::block_count_distribution(profile, 2.0, n, 4, 1ULL << 23));
}
BENCHMARK(BM_BlockDistribution)->DenseRange(10, 22, 4);

}  // namespace

BENCHMARK_MAIN();
