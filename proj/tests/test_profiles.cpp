#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <bset/admissible.hpp>
#include <bset/errors.hpp>
#include <bset/kahan.hpp>
#include <bset/profile.hpp>
#include <bset/quadrature.hpp>

using namespace bset;

TEST_CASE("quadrature matches closed forms") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return 1.0 / x; }, 1.0, std::exp(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kahan summation controls error on adversarial series") {
  KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-12));
}

TEST_CASE("admissible function evaluation") {
  const auto ls = AdmissibleFunction::log_shift();
  CHECK(ls(1.0) == doctest::Approx(std::log(std::exp(1.0) + 1.0)));
  CHECK(ls(100.0) == doctest::Approx(std::log(std::exp(1.0) + 100.0)));

  const auto c = AdmissibleFunction::constant(2.5);
  CHECK(c(1.0) == 2.5);
  CHECK(c(1e9) == 2.5);
  CHECK_THROWS_AS(AdmissibleFunction::constant(0.5), ConfigError);

  const auto lp = AdmissibleFunction::log_power(2.0);
  CHECK(lp(100.0) ==
        doctest::Approx(std::pow(std::log(std::exp(1.0) + 100.0), 2.0)));

  const auto tab = AdmissibleFunction::table({1.0, 10.0, 100.0}, {1.0, 2.0, 4.0});
  CHECK(tab(5.0) == 1.0);
  CHECK(tab(10.0) == 2.0);
  CHECK(tab(1e6) == 4.0);
  // Bad table data is rejected at construction as a configuration error.
  CHECK_THROWS_AS(AdmissibleFunction::table({1.0, 10.0}, {1.0, 0.5}),
                  ConfigError);
}

TEST_CASE("admissible function JSON round trip") {
  for (const auto& f :
       {AdmissibleFunction::log_shift(), AdmissibleFunction::log_power(1.5),
        AdmissibleFunction::iterated_log(), AdmissibleFunction::constant(3.0),
        AdmissibleFunction::table({1.0, 5.0}, {1.0, 2.0})}) {
    const auto g = AdmissibleFunction::from_json(f.to_json());
    CHECK(g.to_json() == f.to_json());
    CHECK(g(17.0) == doctest::Approx(f(17.0)));
  }
}

TEST_CASE("convergence classification on canonical series") {
  const std::vector<std::uint64_t> cutoffs{1000, 10000, 100000, 1000000,
                                           10000000, 100000000};
  // Harmonic-like: partial sums of the integral of 1/(x log(e+x)) diverge.
  const auto harmonic = check_admissibility(AdmissibleFunction::log_shift(),
                                            {1.0}, cutoffs);
  CHECK(harmonic.first_integral.verdict == Verdict::Diverges);
  REQUIRE(harmonic.second_integral_per_epsilon.size() == 1);
  CHECK(harmonic.second_integral_per_epsilon[0].second.verdict ==
        Verdict::Converges);
  CHECK(harmonic.admissible_diagnosis);

  // f = 1: second integral equals the first, also divergent => not admissible.
  const auto flat =
      check_admissibility(AdmissibleFunction::constant(1.0), {1.0}, cutoffs);
  CHECK(flat.first_integral.verdict == Verdict::Diverges);
  CHECK(flat.second_integral_per_epsilon[0].second.verdict == Verdict::Diverges);
  CHECK_FALSE(flat.admissible_diagnosis);

  // f = log^2: first integral converges => not admissible.
  const auto steep =
      check_admissibility(AdmissibleFunction::log_power(2.0), {1.0}, cutoffs);
  CHECK(steep.first_integral.verdict == Verdict::Converges);
  CHECK_FALSE(steep.admissible_diagnosis);

  CHECK_THROWS_AS(check_admissibility(AdmissibleFunction::log_shift(), {},
                                      cutoffs),
                  ConfigError);
  CHECK_THROWS_AS(check_admissibility(AdmissibleFunction::log_shift(), {1.0},
                                      {10, 100}),
                  ConfigError);
}

TEST_CASE("block_integral matches direct quadrature") {
  const auto f = AdmissibleFunction::log_shift();
  for (int n : {2, 5, 10, 20}) {
    const double direct =
        integrate([&](double x) { return 1.0 / (x * f(x)); }, std::pow(2.0, n),
                  std::pow(2.0, n + 1));
    CHECK(block_integral(f, 2.0, n) == doctest::Approx(direct).epsilon(1e-8));
  }
  CHECK_THROWS_AS(block_integral(f, 2.0, 1400), NumericError);
}

TEST_CASE("profile evaluation per kind") {
  const auto ap =
      ProbabilityProfile::admissible_power(AdmissibleFunction::log_shift(), 1.0);
  CHECK(ap.prob_at(1) ==
        doctest::Approx(1.0 / std::log(std::exp(1.0) + 1.0)));
  CHECK(ap.prob_at(1000) ==
        doctest::Approx(1.0 / (1000.0 * std::log(std::exp(1.0) + 1000.0))));
  CHECK_THROWS_AS(ap.prob_at(0), ConfigError);

  const auto se = ProbabilityProfile::sub_exponential(0.5, 0.5);
  CHECK(se.prob_at(1) == 0.5);  // clamped
  CHECK(se.prob_at(100) ==
        doctest::Approx(std::exp(-0.5 * std::sqrt(std::log(100.0)))));

  const auto pl = ProbabilityProfile::power_law(1.0, 0.5);
  CHECK(pl.prob_at(4) == doctest::Approx(0.5));
  CHECK(ProbabilityProfile::power_law(10.0, 0.5).prob_at(4) == 1.0);  // clamped

  const auto cst = ProbabilityProfile::constant(0.3);
  CHECK(cst.prob_at(7) == 0.3);
  CHECK(cst.log_survival_at(7) == doctest::Approx(std::log(0.7)));
  CHECK(ProbabilityProfile::constant(1.0).log_survival_at(1) ==
        -std::numeric_limits<double>::infinity());

  const auto tab = ProbabilityProfile::table({0.1, 0.2, 0.3});
  CHECK(tab.prob_at(2) == 0.2);
  CHECK(tab.prob_at(4) == 0.0);

  const auto masked = ProbabilityProfile::masked(
      cst, BoundedGapSet::arithmetic_progression(1, 2));
  CHECK(masked.prob_at(1) == 0.3);
  CHECK(masked.prob_at(2) == 0.0);
  CHECK(masked.prob_at(3) == 0.3);
}

TEST_CASE("profile construction rejects bad parameters") {
  CHECK_THROWS_AS(ProbabilityProfile::admissible_power(
                      AdmissibleFunction::log_shift(), 0.0),
                  ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::admissible_power(
                      AdmissibleFunction::log_shift(), 1.5),
                  ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::sub_exponential(-1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::sub_exponential(0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::power_law(1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::constant(1.5), ConfigError);
  CHECK_THROWS_AS(ProbabilityProfile::table({0.5, 2.0}), ConfigError);
}

TEST_CASE("profile JSON round trip and digest stability") {
  const auto specs = {
      ProbabilityProfile::admissible_power(AdmissibleFunction::log_shift(), 0.5),
      ProbabilityProfile::sub_exponential(0.5, 0.5),
      ProbabilityProfile::power_law(2.0, 0.4),
      ProbabilityProfile::constant(0.25),
      ProbabilityProfile::table({0.1, 0.9}),
      ProbabilityProfile::masked(ProbabilityProfile::constant(0.5),
                                 BoundedGapSet::arithmetic_progression(2, 2))};
  for (const auto& p : specs) {
    const auto q = ProbabilityProfile::from_json(p.to_json());
    CHECK(q.to_json() == p.to_json());
    CHECK(q.digest() == p.digest());
    CHECK(q.prob_at(3) == doctest::Approx(p.prob_at(3)));
  }
  // Distinct profiles should (in practice) have distinct digests.
  CHECK(ProbabilityProfile::constant(0.25).digest() !=
        ProbabilityProfile::constant(0.26).digest());
  CHECK_THROWS_AS(ProbabilityProfile::from_json({{"kind", "bogus"}}),
                  ConfigError);
}

TEST_CASE("series_sum values and verdicts") {
  // Constant p: sum = n*p exactly; both powers diverge.
  const auto c = ProbabilityProfile::constant(0.5);
  const auto s1 = series_sum(c, 1, 1000);
  CHECK(s1.value == doctest::Approx(500.0));
  CHECK(s1.verdict.verdict == Verdict::Diverges);
  CHECK(series_sum(c, 2, 100000).verdict.verdict == Verdict::Diverges);

  // p_k = k^-0.6: sum p diverges, sum p^2 (exponent 1.2) converges.
  const auto pl = ProbabilityProfile::power_law(1.0, 0.6);
  CHECK(series_sum(pl, 1, 10000000).verdict.verdict == Verdict::Diverges);
  CHECK(series_sum(pl, 2, 10000000).verdict.verdict == Verdict::Converges);

  CHECK_THROWS_AS(series_sum(c, 3, 100), ConfigError);
}
