#include "bset/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "bset/admissible.hpp"
#include "bset/analyzers.hpp"
#include "bset/errors.hpp"
#include "bset/exact.hpp"
#include "bset/kahan.hpp"
#include "bset/sampler.hpp"
#include "bset/wilson.hpp"

namespace bset {

std::string to_string(SuiteKind s) {
  switch (s) {
    case SuiteKind::LacunaryThm1: return "lacunary_thm1";
    case SuiteKind::LimsupLemma: return "limsup_lemma";
    case SuiteKind::GapGrowthProp2: return "gap_growth_prop2";
    case SuiteKind::BoundedGapProp3: return "bounded_gap_prop3";
    case SuiteKind::APPresenceProp4: return "ap_presence_prop4";
    case SuiteKind::APAbsenceProp5: return "ap_absence_prop5";
  }
  return "unknown";
}

SuiteKind suite_from_string(const std::string& s) {
  if (s == "lacunary_thm1") return SuiteKind::LacunaryThm1;
  if (s == "limsup_lemma") return SuiteKind::LimsupLemma;
  if (s == "gap_growth_prop2") return SuiteKind::GapGrowthProp2;
  if (s == "bounded_gap_prop3") return SuiteKind::BoundedGapProp3;
  if (s == "ap_presence_prop4") return SuiteKind::APPresenceProp4;
  if (s == "ap_absence_prop5") return SuiteKind::APAbsenceProp5;
  throw ConfigError("unknown suite: " + s);
}

ProbabilityProfile ExperimentConfig::profile() const {
  return ProbabilityProfile::from_json(profile_spec);
}

namespace {

const char* const kKnownKeys[] = {
    "schema_version", "suite", "profile", "trials", "master_seed", "sampler",
    "a", "n_first", "n_last", "l", "count_cap", "gap_window", "decades",
    "lags", "set", "mc_n", "max_block_len", "z", "z_accept", "grow_factor",
    "flatten_factor", "decay_factor"};

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  require(j.is_object(), "experiment config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    require(known, "experiment config: unknown key \"" + key + "\"");
  }
  ExperimentConfig cfg;
  try {
    require(j.contains("suite"), "experiment config: missing \"suite\"");
    require(j.contains("profile"), "experiment config: missing \"profile\"");
    cfg.suite = suite_from_string(j.at("suite").get<std::string>());
    cfg.profile_spec = j.at("profile");
    cfg.trials = j.value("trials", std::uint64_t{1});
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.sampler = sampler_kind_from_string(j.value("sampler", std::string("skip")));
    cfg.a = j.value("a", 2.0);
    cfg.n_first = j.value("n_first", 10);
    cfg.n_last = j.value("n_last", 20);
    cfg.l = j.value("l", 3);
    cfg.count_cap = j.value("count_cap", 4);
    cfg.gap_window = j.value("gap_window", std::uint64_t{16});
    if (j.contains("decades"))
      cfg.decades = j.at("decades").get<std::vector<std::uint64_t>>();
    if (j.contains("lags"))
      cfg.lags = j.at("lags").get<std::vector<std::uint64_t>>();
    if (j.contains("set")) cfg.set_spec = j.at("set");
    cfg.mc_n = j.value("mc_n", std::uint64_t{10000});
    cfg.max_block_len = j.value("max_block_len", std::uint64_t{1} << 23);
    cfg.z = j.value("z", 1.96);
    cfg.z_accept = j.value("z_accept", 3.29);
    cfg.grow_factor = j.value("grow_factor", 0.5);
    cfg.flatten_factor = j.value("flatten_factor", 0.05);
    cfg.decay_factor = j.value("decay_factor", 10.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }

  require(cfg.trials >= 1, "experiment config: trials must be >= 1");
  require(cfg.a > 1.0, "experiment config: block base a must be > 1");
  cfg.profile();  // validates the profile spec

  const bool needs_window = cfg.suite == SuiteKind::LacunaryThm1 ||
                            cfg.suite == SuiteKind::LimsupLemma;
  if (needs_window) {
    require(j.contains("n_first") && j.contains("n_last"),
            "block suites need n_first and n_last");
    require(cfg.n_first >= 0 && cfg.n_last >= cfg.n_first &&
                cfg.n_last - cfg.n_first < 62,
            "block window must satisfy 0 <= n_first <= n_last, width < 62");
  }
  const bool needs_decades = cfg.suite == SuiteKind::GapGrowthProp2 ||
                             cfg.suite == SuiteKind::BoundedGapProp3 ||
                             cfg.suite == SuiteKind::APPresenceProp4 ||
                             cfg.suite == SuiteKind::APAbsenceProp5;
  if (needs_decades) {
    require(j.contains("decades") && !cfg.decades.empty() &&
                std::is_sorted(cfg.decades.begin(), cfg.decades.end()) &&
                std::adjacent_find(cfg.decades.begin(), cfg.decades.end()) ==
                    cfg.decades.end(),
            "this suite needs a strictly increasing non-empty decade list");
    require(cfg.decades.front() >= 1, "decade cutoffs must be >= 1");
  }
  if (cfg.suite == SuiteKind::BoundedGapProp3)
    require(j.contains("set"), "bounded_gap_prop3 needs a \"set\" spec");
  if (cfg.suite == SuiteKind::BoundedGapProp3 && !cfg.set_spec.is_null())
    BoundedGapSet::from_json(cfg.set_spec);  // validates
  if (cfg.suite == SuiteKind::APPresenceProp4)
    require(cfg.l >= 3, "ap_presence_prop4 needs l >= 3");
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {
      {"schema_version", 1},
      {"suite", to_string(suite)},
      {"profile", profile_spec},
      {"trials", trials},
      {"master_seed", master_seed},
      {"sampler", to_string(sampler)},
      {"a", a},
      {"n_first", n_first},
      {"n_last", n_last},
      {"l", l},
      {"count_cap", count_cap},
      {"gap_window", gap_window},
      {"decades", decades},
      {"lags", lags},
      {"mc_n", mc_n},
      {"max_block_len", max_block_len},
      {"z", z},
      {"z_accept", z_accept},
      {"grow_factor", grow_factor},
      {"flatten_factor", flatten_factor},
      {"decay_factor", decay_factor},
  };
  if (!set_spec.is_null()) j["set"] = set_spec;
  return j;
}

nlohmann::json ExperimentReport::full() const {
  nlohmann::json j = body;
  j["timing"] = timing;
  return j;
}

namespace {

struct Flag {
  std::string name;
  bool pass = false;
  bool warn_only = false;
  std::string detail;
};

nlohmann::json flags_to_json(const std::vector<Flag>& flags, bool* all_pass) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : flags) {
    out.push_back({{"name", f.name},
                   {"pass", f.pass},
                   {"severity", f.warn_only ? "warn" : "accept"},
                   {"detail", f.detail}});
    if (!f.warn_only && !f.pass) *all_pass = false;
  }
  return out;
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  nlohmann::json rows = nlohmann::json::array();

  template <typename... Args>
  void add_row(Args&&... args) {
    rows.push_back(nlohmann::json::array({std::forward<Args>(args)...}));
  }
  nlohmann::json to_json() const {
    return {{"name", name}, {"columns", columns}, {"rows", rows}};
  }
};

// Runs fn(trial_index) on a worker pool. Callers collect per-trial results
// into trial-indexed storage and fold sequentially afterwards, so the output
// never depends on the schedule.
template <typename Fn>
void for_each_trial(std::uint64_t trials, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || trials < 2) {
    for (std::uint64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
        next.store(trials, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& v) {
  KahanSum s;
  for (double x : v) s.add(x);
  return v.empty() ? 0.0 : s.value() / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  KahanSum s;
  for (double x : v) s.add((x - mean) * (x - mean));
  return std::sqrt(s.value() / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Flag mean_matches_exact(const std::string& name, double mean, double sd,
                        std::uint64_t trials, double exact) {
  const double se = sd / std::sqrt(static_cast<double>(trials));
  Flag f;
  f.name = name;
  f.pass = std::abs(mean - exact) <= 4.0 * se || mean == exact;
  f.detail = "mean=" + std::to_string(mean) + " exact=" + std::to_string(exact) +
             " se=" + std::to_string(se);
  return f;
}

std::vector<double> increments(const std::vector<double>& partials) {
  std::vector<double> inc;
  for (std::size_t i = 1; i < partials.size(); ++i)
    inc.push_back(partials[i] - partials[i - 1]);
  return inc;
}

Flag grow_flag(const std::string& name, const std::vector<double>& incs,
               double grow_factor) {
  Flag f;
  f.name = name;
  f.pass = incs.size() >= 2 && incs.back() >= grow_factor * incs.front();
  f.detail = incs.size() >= 2 ? "first_inc=" + std::to_string(incs.front()) +
                                    " last_inc=" + std::to_string(incs.back())
                              : "need at least 3 ladder points";
  return f;
}

Flag decay_flag(const std::string& name, const std::vector<double>& incs,
                double decay_factor) {
  Flag f;
  f.name = name;
  if (incs.size() < 2) {
    f.detail = "need at least 3 ladder points";
    return f;
  }
  f.pass = incs.back() == 0.0 || incs.front() >= decay_factor * incs.back();
  f.detail = "first_inc=" + std::to_string(incs.front()) +
             " last_inc=" + std::to_string(incs.back());
  return f;
}

// Warn-only grid check that p_k is non-increasing (Prop 3 hypothesis).
Flag non_increasing_flag(const ProbabilityProfile& profile, std::uint64_t horizon) {
  Flag f;
  f.name = "profile_non_increasing";
  f.warn_only = true;
  f.pass = true;
  double prev = profile.prob_at(1);
  for (std::uint64_t k = 2; k <= std::min<std::uint64_t>(horizon, 4096); ++k) {
    const double p = profile.prob_at(k);
    if (p > prev + 1e-15) {
      f.pass = false;
      f.detail = "p_k increases at k=" + std::to_string(k);
      return f;
    }
    prev = p;
  }
  for (std::uint64_t k = 4096; k * 2 <= horizon; k *= 2) {
    const double p = profile.prob_at(k * 2);
    if (p > profile.prob_at(k) + 1e-15) {
      f.pass = false;
      f.detail = "p_k increases near k=" + std::to_string(k * 2);
      return f;
    }
  }
  return f;
}

std::uint64_t floor_inverse(double alpha) {
  return static_cast<std::uint64_t>(std::floor(1.0 / alpha + 1e-12));
}

nlohmann::json suite_limsup_lemma(const ExperimentConfig& cfg, int jobs,
                                  std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  require(profile.kind() == ProbabilityProfile::Kind::AdmissiblePower,
          "limsup_lemma needs an admissible_power profile");
  const std::uint64_t c_target = floor_inverse(profile.alpha());
  const int cap = static_cast<int>(c_target) + 1;

  std::vector<double> exact_eq, exact_ge;
  std::vector<std::uint64_t> lengths;
  for (int n = cfg.n_first; n <= cfg.n_last; ++n) {
    const auto dist =
        block_count_distribution(profile, cfg.a, n, cap, cfg.max_block_len);
    exact_eq.push_back(dist.probs[c_target]);
    exact_ge.push_back(dist.at_least(c_target + 1));
    lengths.push_back(block_bounds(cfg.a, n).second - block_bounds(cfg.a, n).first);
  }

  // Monte Carlo over the whole window range.
  const std::uint64_t lo = block_bounds(cfg.a, cfg.n_first).first;
  const std::uint64_t hi = block_bounds(cfg.a, cfg.n_last).second;
  const std::size_t width = static_cast<std::size_t>(cfg.n_last - cfg.n_first + 1);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks(cfg.trials);
  SurvivalCache cache(profile, hi);
  for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
    RngStream rng(substream_seed(cfg.master_seed, t));
    const Realization r =
        cfg.sampler == SamplerKind::Naive
            ? sample_naive(profile, hi, rng, lo)
            : sample_skip(profile, hi, rng, lo, &cache);
    const auto bc = block_counts(r, cfg.a, cfg.n_first, cfg.n_last);
    std::uint64_t eq_mask = 0, ge_mask = 0;
    for (std::size_t i = 0; i < width; ++i) {
      if (bc.counts[i] == c_target) eq_mask |= std::uint64_t{1} << i;
      if (bc.counts[i] >= c_target + 1) ge_mask |= std::uint64_t{1} << i;
    }
    masks[t] = {eq_mask, ge_mask};
  });
  std::vector<std::uint64_t> eq_hits(width, 0), ge_hits(width, 0);
  for (const auto& [eq_mask, ge_mask] : masks)
    for (std::size_t i = 0; i < width; ++i) {
      eq_hits[i] += (eq_mask >> i) & 1;
      ge_hits[i] += (ge_mask >> i) & 1;
    }

  Table table{"block_law", {"n", "L_n", "exact_eq_C", "exact_ge_C1", "emp_eq",
                            "emp_eq_lo", "emp_eq_hi", "emp_ge", "emp_ge_lo",
                            "emp_ge_hi"}};
  for (std::size_t i = 0; i < width; ++i) {
    const int n = cfg.n_first + static_cast<int>(i);
    const auto eq_ci = wilson_interval(eq_hits[i], cfg.trials, cfg.z);
    const auto ge_ci = wilson_interval(ge_hits[i], cfg.trials, cfg.z);
    table.add_row(n, lengths[i], exact_eq[i], exact_ge[i], eq_ci.point,
                  eq_ci.lower, eq_ci.upper, ge_ci.point, ge_ci.lower,
                  ge_ci.upper);
    const auto eq_acc = wilson_interval(eq_hits[i], cfg.trials, cfg.z_accept);
    flags.push_back({"exact_eq_in_ci_n" + std::to_string(n),
                     eq_acc.contains(exact_eq[i]), false,
                     "exact=" + std::to_string(exact_eq[i])});
  }

  Flag decreasing{"exact_ge_strictly_decreasing", true, false, ""};
  for (std::size_t i = 1; i < exact_ge.size(); ++i)
    decreasing.pass = decreasing.pass && exact_ge[i] < exact_ge[i - 1];
  flags.push_back(decreasing);
  // Partial-sum increments of the two Borel-Cantelli halves are the per-n
  // terms themselves.
  flags.push_back(grow_flag("exact_eq_partial_sum_grows", exact_eq, cfg.grow_factor));
  flags.push_back(decay_flag("exact_ge_increment_decay", exact_ge, cfg.decay_factor));

  return {{"name", "limsup_lemma"},
          {"C", c_target},
          {"alpha", profile.alpha()},
          {"tables", nlohmann::json::array({table.to_json()})}};
}

nlohmann::json suite_lacunary_thm1(const ExperimentConfig& cfg, int jobs,
                                   std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  require(profile.kind() == ProbabilityProfile::Kind::AdmissiblePower &&
              profile.alpha() == 1.0,
          "lacunary_thm1 needs an admissible_power profile with alpha = 1");
  require(cfg.a == 2.0, "lacunary_thm1 uses dyadic blocks (a = 2)");
  const AdmissibleFunction& f = *profile.admissible_f();
  const auto adm = check_admissibility(
      f, {1.0}, {1000, 10000, 100000, 1000000, 10000000, 100000000, 1000000000});
  require(adm.admissible_diagnosis,
          "lacunary_thm1: profile's f fails the admissibility diagnostic");

  const int n_first = cfg.n_first, n_last = cfg.n_last;
  const std::uint64_t lo = block_bounds(2.0, n_first).first;
  const std::uint64_t hi = block_bounds(2.0, n_last + 1).second;
  const std::size_t width = static_cast<std::size_t>(n_last - n_first + 1);

  struct TrialOut {
    std::uint64_t joint_mask = 0;
    std::uint64_t zero_mask = 0;
    double tail_inf = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<TrialOut> outs(cfg.trials);
  SurvivalCache cache(profile, hi);
  for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
    RngStream rng(substream_seed(cfg.master_seed, t));
    const Realization r =
        cfg.sampler == SamplerKind::Naive
            ? sample_naive(profile, hi, rng, lo)
            : sample_skip(profile, hi, rng, lo, &cache);
    const auto bc = block_counts(r, 2.0, n_first, n_last + 1);
    TrialOut out;
    for (std::size_t i = 0; i <= width; ++i)
      if (bc.counts[i] == 0) out.zero_mask |= std::uint64_t{1} << i;
    for (std::size_t i = 0; i < width; ++i)
      if (bc.counts[i] >= 1 && bc.counts[i + 1] >= 1)
        out.joint_mask |= std::uint64_t{1} << i;
    const auto ls = lacunarity_stats(r, bc);
    if (auto ti = ls.tail_inf(cfg.gap_window)) out.tail_inf = *ti;
    outs[t] = out;
  });

  std::vector<std::uint64_t> joint(width, 0), zeros(width + 1, 0);
  std::vector<double> tail_infs;
  for (const auto& out : outs) {
    for (std::size_t i = 0; i < width; ++i) joint[i] += (out.joint_mask >> i) & 1;
    for (std::size_t i = 0; i <= width; ++i) zeros[i] += (out.zero_mask >> i) & 1;
    if (!std::isnan(out.tail_inf)) tail_infs.push_back(out.tail_inf);
  }

  std::vector<double> env(width), emp(width);
  std::vector<double> a_int(width + 1);
  for (std::size_t i = 0; i <= width; ++i)
    a_int[i] = block_integral(f, 2.0, n_first + static_cast<int>(i));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    env[i] = a_int[i] * a_int[i + 1];
    emp[i] = static_cast<double>(joint[i]) / static_cast<double>(cfg.trials);
    num += emp[i] * env[i];
    den += env[i] * env[i];
  }
  const double fitted = den > 0.0 ? num / den : 0.0;

  Table table{"adjacent_blocks",
              {"n", "A_n", "envelope", "fitted_bound", "emp_joint", "ci_lo",
               "ci_hi", "factorized_product", "f_sq_bound"}};
  for (std::size_t i = 0; i < width; ++i) {
    const int n = n_first + static_cast<int>(i);
    const auto ci = wilson_interval(joint[i], cfg.trials, cfg.z_accept);
    const double p_zero_n = static_cast<double>(zeros[i]) / cfg.trials;
    const double p_zero_next = static_cast<double>(zeros[i + 1]) / cfg.trials;
    const double product = (1.0 - p_zero_n) * (1.0 - p_zero_next);
    const double f2 =
        1.0 / (f(std::pow(2.0, n)) * f(std::pow(2.0, n)));
    table.add_row(n, a_int[i], env[i], fitted * env[i], emp[i], ci.lower,
                  ci.upper, product, f2);
    const double se = std::sqrt(emp[i] * (1.0 - emp[i]) / cfg.trials);
    flags.push_back({"below_envelope_n" + std::to_string(n),
                     emp[i] <= fitted * env[i] + 4.0 * se, false,
                     "emp=" + std::to_string(emp[i]) +
                         " bound=" + std::to_string(fitted * env[i])});
    flags.push_back({"independence_factorization_n" + std::to_string(n),
                     ci.contains(product), false,
                     "product=" + std::to_string(product)});
    flags.push_back({"envelope_below_f_sq_n" + std::to_string(n),
                     env[i] <= f2 * (1.0 + 1e-9), false, ""});
  }

  Table ratios{"tail_inf_ratios", {"quantile", "value"}};
  if (!tail_infs.empty()) {
    std::sort(tail_infs.begin(), tail_infs.end());
    auto q = [&](double frac) {
      return tail_infs[std::min(tail_infs.size() - 1,
                                static_cast<std::size_t>(frac * tail_infs.size()))];
    };
    ratios.add_row("min", tail_infs.front());
    ratios.add_row("q25", q(0.25));
    ratios.add_row("median", q(0.5));
    ratios.add_row("q75", q(0.75));
    ratios.add_row("max", tail_infs.back());
  }

  return {{"name", "lacunary_thm1"},
          {"fitted_constant", fitted},
          {"trials_with_ratios", tail_infs.size()},
          {"tables", nlohmann::json::array({table.to_json(), ratios.to_json()})}};
}

nlohmann::json suite_gap_growth_prop2(const ExperimentConfig& cfg, int jobs,
                                      std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  const std::uint64_t n_max = cfg.decades.back();

  {
    const auto s1 = series_sum(profile, 1, n_max);
    const auto s2 = series_sum(profile, 2, n_max);
    flags.push_back({"hypothesis_sum_p_diverges",
                     s1.verdict.verdict == Verdict::Diverges, true,
                     to_string(s1.verdict.verdict)});
    flags.push_back({"hypothesis_sum_p_sq_converges",
                     s2.verdict.verdict == Verdict::Converges, true,
                     to_string(s2.verdict.verdict)});
  }

  SurvivalCache cache(profile, n_max);
  Table gap_table{"tail_min_gap", {"N", "median_tail_min_gap", "defined_trials"}};
  Table pair_table{"pair_coincidences",
                   {"N", "lag", "exact_sum", "emp_mean", "emp_sd", "pass"}};
  std::vector<double> medians;
  for (std::size_t di = 0; di < cfg.decades.size(); ++di) {
    const std::uint64_t n = cfg.decades[di];
    struct TrialOut {
      double tail_min = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> lag_counts;
    };
    std::vector<TrialOut> outs(cfg.trials);
    for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
      RngStream rng(substream_seed(cfg.master_seed, di * cfg.trials + t));
      const Realization r = cfg.sampler == SamplerKind::Naive
                                ? sample_naive(profile, n, rng)
                                : sample_skip(profile, n, rng, 0, &cache);
      TrialOut out;
      // Gaps among successes in the upper half (N/2, N].
      std::vector<std::uint64_t> upper;
      for (auto k : r.indices)
        if (k > n / 2) upper.push_back(k);
      const GapStats upper_gaps{std::move(upper)};
      if (auto g = upper_gaps.tail_min_gap(cfg.gap_window))
        out.tail_min = static_cast<double>(*g);
      const GapStats all{r.indices};
      for (auto lag : cfg.lags)
        out.lag_counts.push_back(static_cast<double>(all.pair_coincidences(lag)));
      outs[t] = std::move(out);
    });

    std::vector<double> defined;
    for (const auto& out : outs)
      if (!std::isnan(out.tail_min)) defined.push_back(out.tail_min);
    const double med = median_of(defined);
    medians.push_back(med);
    gap_table.add_row(n, med, defined.size());

    for (std::size_t li = 0; li < cfg.lags.size(); ++li) {
      const std::uint64_t lag = cfg.lags[li];
      KahanSum exact;
      for (std::uint64_t k = 1; k + lag <= n; ++k)
        exact.add(profile.prob_at(k) * profile.prob_at(k + lag));
      std::vector<double> counts;
      counts.reserve(cfg.trials);
      for (const auto& out : outs) counts.push_back(out.lag_counts[li]);
      const double mean = mean_of(counts);
      const double sd = sample_sd(counts, mean);
      auto flag = mean_matches_exact("pair_coincidences_N" + std::to_string(n) +
                                         "_lag" + std::to_string(lag),
                                     mean, sd, cfg.trials, exact.value());
      pair_table.add_row(n, lag, exact.value(), mean, sd, flag.pass);
      flags.push_back(std::move(flag));
    }
  }

  Flag monotone{"median_tail_min_gap_nondecreasing", true, false, ""};
  for (std::size_t i = 1; i < medians.size(); ++i)
    monotone.pass = monotone.pass && !(medians[i] < medians[i - 1]);
  flags.push_back(monotone);

  return {{"name", "gap_growth_prop2"},
          {"tables",
           nlohmann::json::array({gap_table.to_json(), pair_table.to_json()})}};
}

nlohmann::json suite_bounded_gap_prop3(const ExperimentConfig& cfg, int jobs,
                                       std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  const BoundedGapSet set = BoundedGapSet::from_json(cfg.set_spec);
  flags.push_back(non_increasing_flag(profile, cfg.decades.back()));

  SurvivalCache cache(profile, cfg.decades.back());
  Table table{"intersection",
              {"N", "exact_miss", "emp_miss", "ci_lo", "ci_hi", "pass"}};
  std::vector<double> exact_misses;
  for (std::size_t di = 0; di < cfg.decades.size(); ++di) {
    const std::uint64_t n = cfg.decades[di];
    const double exact_miss = miss_probability(profile, set, n);
    exact_misses.push_back(exact_miss);
    std::vector<std::uint8_t> missed(cfg.trials, 0);
    for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
      RngStream rng(substream_seed(cfg.master_seed, di * cfg.trials + t));
      const Realization r = cfg.sampler == SamplerKind::Naive
                                ? sample_naive(profile, n, rng)
                                : sample_skip(profile, n, rng, 0, &cache);
      missed[t] = intersect_bounded_gap(r, set).nonempty ? 0 : 1;
    });
    std::uint64_t miss_count = 0;
    for (auto m : missed) miss_count += m;
    const auto ci = wilson_interval(miss_count, cfg.trials, cfg.z_accept);
    const bool pass = ci.contains(exact_miss);
    table.add_row(n, exact_miss, ci.point, ci.lower, ci.upper, pass);
    flags.push_back({"exact_miss_in_ci_N" + std::to_string(n), pass, false,
                     "exact=" + std::to_string(exact_miss) +
                         " emp=" + std::to_string(ci.point)});
  }

  Flag decays{"exact_miss_decays", true, false, ""};
  for (std::size_t i = 1; i < exact_misses.size(); ++i)
    decays.pass = decays.pass && exact_misses[i] <= exact_misses[i - 1];
  if (exact_misses.size() >= 2 && exact_misses.front() > 0.0)
    decays.pass = decays.pass && exact_misses.back() < exact_misses.front();
  flags.push_back(decays);

  return {{"name", "bounded_gap_prop3"},
          {"gap_bound", set.gap_bound()},
          {"tables", nlohmann::json::array({table.to_json()})}};
}

nlohmann::json suite_ap_presence_prop4(const ExperimentConfig& cfg, int jobs,
                                       std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  require(profile.kind() == ProbabilityProfile::Kind::SubExponential,
          "ap_presence_prop4 needs a subexp profile");

  Table ladder{"block_event_expectation", {"k_max", "exact_sum"}};
  std::vector<double> partials;
  for (const auto k_max : cfg.decades) {
    partials.push_back(expected_block_events(profile, cfg.l, k_max));
    ladder.add_row(k_max, partials.back());
  }
  flags.push_back(grow_flag("exact_expectation_grows", increments(partials),
                            cfg.grow_factor));

  require(cfg.mc_n >= 2 * static_cast<std::uint64_t>(cfg.l),
          "ap_presence_prop4: mc_n must be at least 2 * l");
  const std::uint64_t k_max_mc = cfg.mc_n / static_cast<std::uint64_t>(cfg.l) - 1;
  const double exact_mc = expected_block_events(profile, cfg.l, k_max_mc);
  std::vector<double> counts(cfg.trials, 0.0);
  SurvivalCache cache(profile, cfg.mc_n);
  for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
    RngStream rng(substream_seed(cfg.master_seed, t));
    const Realization r = cfg.sampler == SamplerKind::Skip
                              ? sample_skip(profile, cfg.mc_n, rng, 0, &cache)
                              : sample_naive(profile, cfg.mc_n, rng);
    counts[t] =
        static_cast<double>(ap_block_events(r, cfg.l, k_max_mc).size());
  });
  const double mean = mean_of(counts);
  const double sd = sample_sd(counts, mean);
  flags.push_back(
      mean_matches_exact("mc_block_events_match_exact", mean, sd, cfg.trials,
                         exact_mc));

  Table mc{"monte_carlo", {"N", "k_max", "exact", "emp_mean", "emp_sd"}};
  mc.add_row(cfg.mc_n, k_max_mc, exact_mc, mean, sd);
  return {{"name", "ap_presence_prop4"},
          {"l", cfg.l},
          {"tables", nlohmann::json::array({ladder.to_json(), mc.to_json()})}};
}

nlohmann::json suite_ap_absence_prop5(const ExperimentConfig& cfg, int jobs,
                                      std::vector<Flag>& flags) {
  const ProbabilityProfile profile = cfg.profile();
  require(profile.kind() == ProbabilityProfile::Kind::PowerLaw &&
              profile.alpha() > 0.0 && profile.alpha() <= 0.5,
          "ap_absence_prop5 needs a power_law profile with alpha in (0, 1/2]");
  // Smallest integer l with l > 1/alpha.
  const int l = static_cast<int>(floor_inverse(profile.alpha())) + 1;

  Table ladder{"expected_ap_count", {"N", "exact_sum"}};
  std::vector<double> partials;
  for (const auto n : cfg.decades) {
    partials.push_back(expected_ap_count(profile, l, n));
    ladder.add_row(n, partials.back());
  }
  flags.push_back(decay_flag("exact_increment_decay", increments(partials),
                             cfg.decay_factor));

  const double exact_mc = expected_ap_count(profile, l, cfg.mc_n);
  std::vector<double> counts(cfg.trials, 0.0);
  SurvivalCache cache(profile, cfg.mc_n);
  for_each_trial(cfg.trials, jobs, [&](std::uint64_t t) {
    RngStream rng(substream_seed(cfg.master_seed, t));
    const Realization r = cfg.sampler == SamplerKind::Naive
                              ? sample_naive(profile, cfg.mc_n, rng)
                              : sample_skip(profile, cfg.mc_n, rng, 0, &cache);
    counts[t] = static_cast<double>(find_aps(r, l + 1).count);
  });
  const double mean = mean_of(counts);
  const double sd = sample_sd(counts, mean);
  flags.push_back(
      mean_matches_exact("mc_ap_count_matches_exact", mean, sd, cfg.trials,
                         exact_mc));

  Table mc{"monte_carlo", {"N", "ap_length", "exact", "emp_mean", "emp_sd"}};
  mc.add_row(cfg.mc_n, l + 1, exact_mc, mean, sd);
  return {{"name", "ap_absence_prop5"},
          {"l", l},
          {"ap_length", l + 1},
          {"tables", nlohmann::json::array({ladder.to_json(), mc.to_json()})}};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Flag> flags;
  nlohmann::json section;
  switch (cfg.suite) {
    case SuiteKind::LimsupLemma:
      section = suite_limsup_lemma(cfg, jobs, flags);
      break;
    case SuiteKind::LacunaryThm1:
      section = suite_lacunary_thm1(cfg, jobs, flags);
      break;
    case SuiteKind::GapGrowthProp2:
      section = suite_gap_growth_prop2(cfg, jobs, flags);
      break;
    case SuiteKind::BoundedGapProp3:
      section = suite_bounded_gap_prop3(cfg, jobs, flags);
      break;
    case SuiteKind::APPresenceProp4:
      section = suite_ap_presence_prop4(cfg, jobs, flags);
      break;
    case SuiteKind::APAbsenceProp5:
      section = suite_ap_absence_prop5(cfg, jobs, flags);
      break;
  }

  ExperimentReport report;
  report.all_pass = true;
  section["flags"] = flags_to_json(flags, &report.all_pass);
  report.body = {{"schema_version", 1},
                 {"config", cfg.to_json()},
                 {"sections", nlohmann::json::array({section})},
                 {"all_pass", report.all_pass}};
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  report.timing = {{"wall_seconds", elapsed},
                   {"trials_per_second",
                    elapsed > 0.0 ? static_cast<double>(cfg.trials) / elapsed
                                  : 0.0}};
  return report;
}

void write_report_csv(const ExperimentReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& section : report.body.at("sections")) {
    const std::string sname = section.at("name").get<std::string>();
    for (const auto& table : section.at("tables")) {
      const std::string tname = table.at("name").get<std::string>();
      std::ofstream out(std::filesystem::path(dir) / (sname + "_" + tname + ".csv"),
                        std::ios::binary);
      if (!out) throw NumericError("cannot open CSV output in " + dir);
      const auto& columns = table.at("columns");
      for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i].get<std::string>();
      out << '\n';
      for (const auto& row : table.at("rows")) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "," : "");
          if (row[i].is_string())
            out << row[i].get<std::string>();
          else
            out << row[i].dump();
        }
        out << '\n';
      }
    }
  }
}

}  // namespace bset
