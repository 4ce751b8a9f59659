// bset: sample Bernoulli random subsets of the positive integers and verify
// their structural statistics against exact finite-range oracles.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bset/admissible.hpp>
#include <bset/analyzers.hpp>
#include <bset/bounded_gap_set.hpp>
#include <bset/errors.hpp>
#include <bset/exact.hpp>
#include <bset/experiment.hpp>
#include <bset/profile.hpp>
#include <bset/realization.hpp>
#include <bset/sampler.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptanceFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

// A JSON argument is either inline (starts with '{' or '[') or a file path.
nlohmann::json load_json_arg(const std::string& arg) {
  try {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
      return nlohmann::json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw bset::ConfigError("cannot open JSON file: " + arg);
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw bset::ConfigError("bad JSON in \"" + arg + "\": " + e.what());
  }
}

void emit_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_sample(const std::string& profile_arg, std::uint64_t range,
               std::uint64_t seed, const std::string& sampler,
               const std::string& out_path, const std::string& format) {
  const auto profile = bset::ProbabilityProfile::from_json(load_json_arg(profile_arg));
  const auto kind = bset::sampler_kind_from_string(sampler);
  bset::RealizationFormat fmt;
  if (format == "text")
    fmt = bset::RealizationFormat::Text;
  else if (format == "binary")
    fmt = bset::RealizationFormat::Binary;
  else
    throw bset::ConfigError("--format must be text or binary");

  const auto start = std::chrono::steady_clock::now();
  const bset::Realization r = bset::sample(profile, kind, range, seed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bset::ConfigError("cannot open output file: " + out_path);
  bset::write_realization(out, r, fmt);
  out.close();

  nlohmann::json summary = {
      {"schema_version", 1},
      {"config",
       {{"profile", profile.to_json()},
        {"range", range},
        {"seed", seed},
        {"sampler", sampler},
        {"out", out_path},
        {"format", format}}},
      {"count", r.indices.size()},
      {"elapsed_seconds", elapsed}};
  if (!r.indices.empty()) {
    summary["min"] = r.indices.front();
    summary["max"] = r.indices.back();
  }
  emit_json(summary);
  return kExitOk;
}

int cmd_analyze(const std::string& file, double block_base, int ap_length,
                std::uint64_t gap_window, const std::string& set_arg,
                const std::string& out_dir, const std::string& emit) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw bset::ConfigError("cannot open realization file: " + file);
  const bset::Realization r = bset::read_realization(in);
  std::filesystem::create_directories(out_dir);
  const bool want_csv = emit == "csv" || emit == "both";
  const bool want_json = emit == "json" || emit == "both";
  if (!want_csv && !want_json)
    throw bset::ConfigError("--emit must be csv, json or both");

  nlohmann::json report = {
      {"schema_version", 1},
      {"config",
       {{"file", file},
        {"block_base", block_base},
        {"ap_length", ap_length},
        {"gap_window", gap_window},
        {"emit", emit},
        {"out", out_dir}}},
      {"count", r.indices.size()},
      {"range_end", r.range_end}};

  const auto csv_path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  const auto open_csv = [&](const char* name) {
    std::ofstream f(csv_path(name), std::ios::binary);
    if (!f) throw bset::ConfigError(std::string("cannot write ") + csv_path(name));
    return f;
  };

  // Blocks up to the largest n with a^(n+1) <= range_end.
  int last_n = -1;
  while (bset::block_bounds(block_base, last_n + 1).second <= r.range_end)
    ++last_n;
  const auto gs = bset::gap_sequence(r);
  if (want_csv) {
    auto f2 = open_csv("gaps.csv");
    bset::write_gaps_csv(f2, gs);
  }
  report["gap_count"] = gs.gaps().size();
  if (auto g = gs.tail_min_gap(gap_window)) report["tail_min_gap"] = *g;
  if (last_n >= 0) {
    const auto bc = bset::block_counts(r, block_base, 0, last_n);
    const auto ls = bset::lacunarity_stats(r, bc);
    if (want_csv) {
      auto f1 = open_csv("block_counts.csv");
      bset::write_block_counts_csv(f1, bc);
    }
    report["blocks"] = {{"first_n", bc.first_n},
                        {"last_n", bc.last_n},
                        {"counts", bc.counts}};
    if (auto ti = ls.tail_inf(gap_window)) report["tail_inf_ratio"] = *ti;
  }

  if (ap_length >= 3) {
    const auto aps = bset::find_aps(r, ap_length);
    if (want_csv) {
      auto f = open_csv("aps.csv");
      bset::write_aps_csv(f, aps);
    }
    report["aps"] = {{"length", aps.length},
                     {"count", aps.count},
                     {"truncated", aps.truncated}};
  }
  if (!set_arg.empty()) {
    const auto set = bset::BoundedGapSet::from_json(load_json_arg(set_arg));
    const auto hit = bset::intersect_bounded_gap(r, set);
    report["bounded_gap_intersection"] = {{"nonempty", hit.nonempty}};
    if (hit.first_hit) report["bounded_gap_intersection"]["first_hit"] = *hit.first_hit;
  }
  if (want_json) emit_json(report);
  return kExitOk;
}

int cmd_dist(const std::string& profile_arg, double base, int n, int cap,
             std::uint64_t max_block_len) {
  const auto profile = bset::ProbabilityProfile::from_json(load_json_arg(profile_arg));
  const auto dist =
      bset::block_count_distribution(profile, base, n, cap, max_block_len);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < dist.probs.size(); ++j)
    rows.push_back({{"j", j}, {"prob", dist.probs[j]}});
  emit_json({{"schema_version", 1},
             {"config",
              {{"profile", profile.to_json()},
               {"base", base},
               {"n", n},
               {"cap", cap},
               {"max_block_len", max_block_len}}},
             {"probs", rows},
             {"overflow", dist.overflow}});
  return kExitOk;
}

int cmd_admissible(const std::string& f_arg, std::vector<double> epsilons,
                   std::vector<std::uint64_t> cutoffs) {
  const auto f = bset::AdmissibleFunction::from_json(load_json_arg(f_arg));
  if (epsilons.empty()) epsilons = {1.0};
  if (cutoffs.empty())
    cutoffs = {1000, 10000, 100000, 1000000, 10000000, 100000000};
  const auto report = bset::check_admissibility(f, epsilons, cutoffs);
  nlohmann::json seconds = nlohmann::json::array();
  for (const auto& [eps, verdict] : report.second_integral_per_epsilon)
    seconds.push_back({{"epsilon", eps},
                       {"verdict", bset::to_string(verdict.verdict)},
                       {"growth_exponent", verdict.growth_exponent_estimate}});
  emit_json({{"schema_version", 1},
             {"config",
              {{"f", f.to_json()}, {"epsilons", epsilons}, {"cutoffs", cutoffs}}},
             {"first_integral",
              {{"verdict", bset::to_string(report.first_integral.verdict)},
               {"growth_exponent", report.first_integral.growth_exponent_estimate}}},
             {"second_integrals", seconds},
             {"admissible", report.admissible_diagnosis}});
  return kExitOk;
}

int cmd_experiment(const std::string& config_arg, int jobs,
                   const std::string& emit, const std::string& out_dir) {
  const auto cfg = bset::ExperimentConfig::from_json(load_json_arg(config_arg));
  const bool want_csv = emit == "csv" || emit == "both";
  const bool want_json = emit == "json" || emit == "both";
  if (!want_csv && !want_json)
    throw bset::ConfigError("--emit must be csv, json or both");
  if (jobs < 1) throw bset::ConfigError("--jobs must be >= 1");

  const auto report = bset::run_experiment(cfg, jobs);
  std::filesystem::create_directories(out_dir);
  if (want_json) {
    const auto path = std::filesystem::path(out_dir) / "report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bset::ConfigError("cannot write " + path.string());
    out << report.body.dump(2) << '\n';
    const auto tpath = std::filesystem::path(out_dir) / "timing.json";
    std::ofstream tout(tpath, std::ios::binary);
    tout << report.timing.dump(2) << '\n';
  }
  if (want_csv) bset::write_report_csv(report, out_dir);
  emit_json(report.full());
  return report.all_pass ? kExitOk : kExitAcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernoulli random integer sets: samplers, exact block-law and "
               "progression oracles, and Monte Carlo verification suites"};
  app.require_subcommand(1);

  std::string profile_arg, out_path, set_arg, f_arg, config_arg, file_arg;
  std::string sampler = "skip", format = "text", emit = "both", out_dir = ".";
  std::uint64_t range = 0, seed = 0, gap_window = 16;
  std::uint64_t max_block_len = 1ULL << 23;
  double block_base = 2.0;
  int ap_length = 0, dist_n = 0, cap = 4, jobs = 1;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> cutoffs;

  auto* sample = app.add_subcommand("sample", "Sample a realization to a file");
  sample->add_option("profile", profile_arg, "Profile JSON (inline or path)")
      ->required();
  sample->add_option("--range", range, "Sample indices in [1, N]")->required();
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--sampler", sampler, "naive|skip");
  sample->add_option("--out", out_path, "Output realization file")->required();
  sample->add_option("--format", format, "text|binary");

  auto* analyze = app.add_subcommand("analyze", "Analyze a realization file");
  analyze->add_option("file", file_arg, "Realization file")->required();
  analyze->add_option("--block-base", block_base, "Block base a");
  analyze->add_option("--ap-length", ap_length,
                      "Enumerate progressions of this length (>= 3)");
  analyze->add_option("--gap-window", gap_window, "Tail window w");
  analyze->add_option("--bounded-gap-set", set_arg,
                      "Bounded-gap set JSON (inline or path)");
  analyze->add_option("--out", out_dir, "Output directory for CSVs");
  analyze->add_option("--emit", emit, "csv|json|both");

  auto* dist = app.add_subcommand("dist", "Exact block-count distribution");
  dist->add_option("profile", profile_arg, "Profile JSON (inline or path)")
      ->required();
  dist->add_option("--base", block_base, "Block base a");
  dist->add_option("--n", dist_n, "Block index n")->required();
  dist->add_option("--cap", cap, "Count cap (overflow mass beyond)");
  dist->add_option("--max-block-len", max_block_len,
                   "Refuse blocks longer than this");

  auto* admissible = app.add_subcommand("admissible", "Admissibility diagnostic");
  admissible->add_option("f", f_arg, "Function JSON (inline or path)")->required();
  admissible->add_option("--epsilons", epsilons, "Epsilon list");
  admissible->add_option("--cutoffs", cutoffs, "Increasing cutoff list");

  auto* experiment = app.add_subcommand("experiment", "Run a verification suite");
  experiment->add_option("config", config_arg, "Config JSON (inline or path)")
      ->required();
  experiment->add_option("--jobs", jobs, "Worker threads");
  experiment->add_option("--emit", emit, "csv|json|both");
  experiment->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (sample->parsed())
      return cmd_sample(profile_arg, range, seed, sampler, out_path, format);
    if (analyze->parsed())
      return cmd_analyze(file_arg, block_base, ap_length, gap_window, set_arg,
                         out_dir, emit);
    if (dist->parsed())
      return cmd_dist(profile_arg, block_base, dist_n, cap, max_block_len);
    if (admissible->parsed()) return cmd_admissible(f_arg, epsilons, cutoffs);
    if (experiment->parsed())
      return cmd_experiment(config_arg, jobs, emit, out_dir);
    std::cerr << "no subcommand given\n";
    return kExitConfigError;
  } catch (const bset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const bset::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericError;
  }
}
