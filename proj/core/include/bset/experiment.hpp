#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bset/profile.hpp"
#include "bset/realization.hpp"

namespace bset {

// One verification suite per theorem-shaped claim. Almost-sure statements are
// not testable directly; each suite pairs exact finite-range probabilities or
// expectations with Monte Carlo estimates and trend assertions across a
// ladder of cutoffs.
enum class SuiteKind {
  LacunaryThm1,
  LimsupLemma,
  GapGrowthProp2,
  BoundedGapProp3,
  APPresenceProp4,
  APAbsenceProp5,
};

std::string to_string(SuiteKind s);
SuiteKind suite_from_string(const std::string& s);

struct ExperimentConfig {
  nlohmann::json profile_spec;
  SuiteKind suite = SuiteKind::BoundedGapProp3;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  SamplerKind sampler = SamplerKind::Skip;

  // Suite parameters (which ones apply depends on the suite).
  double a = 2.0;                      // block base
  int n_first = 10, n_last = 20;       // block window
  int l = 3;                           // progression parameter
  int count_cap = 4;                   // block-law truncation
  std::uint64_t gap_window = 16;       // w for tail_min_gap
  std::vector<std::uint64_t> decades;  // cutoff ladder
  std::vector<std::uint64_t> lags{1, 2, 3};
  nlohmann::json set_spec;             // bounded-gap set S
  std::uint64_t mc_n = 10000;          // Monte Carlo range for the AP suites
  std::uint64_t max_block_len = 1ULL << 23;

  double z = 1.96;
  double z_accept = 3.29;      // acceptance comparisons, 99.9%
  double grow_factor = 0.5;    // divergent sums: last increment >= this * first
  double flatten_factor = 0.05;
  double decay_factor = 10.0;  // convergent sums: first increment >= this * last

  ProbabilityProfile profile() const;
  // Validates completeness for the chosen suite before any sampling.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // fully resolved, defaults filled
};

struct ExperimentReport {
  // Config echo plus per-suite sections with tables and pass/fail flags.
  // Deterministic given the config, independent of worker count.
  nlohmann::json body;
  // Wall-clock metrics; kept out of the body so determinism comparisons and
  // file diffs ignore them.
  nlohmann::json timing;
  bool all_pass = true;

  nlohmann::json full() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// One CSV file per report table, written into dir as <section>_<table>.csv.
void write_report_csv(const ExperimentReport& report, const std::string& dir);

}  // namespace bset
