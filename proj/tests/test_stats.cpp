#include <doctest/doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pm/stats.hpp"

TEST_CASE("summary statistics on small samples") {
  std::vector<double> xs = {3.0, 1.0, 2.0};
  CHECK(pm::mean(xs) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pm::median(xs) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pm::sample_stddev(xs) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pm::median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(pm::sample_stddev({5.0}) == 0.0);
  CHECK_THROWS_AS(pm::mean({}), std::invalid_argument);
  CHECK_THROWS_AS(pm::median({}), std::invalid_argument);
  CHECK_THROWS_AS(pm::ci99_half_width({}), std::invalid_argument);
}

TEST_CASE("confidence half-width identity") {
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  double expect = pm::kZ995 * pm::sample_stddev(xs) / 2.0;
  CHECK(pm::ci99_half_width(xs) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("regularized incomplete beta basics") {
  CHECK(pm::reg_inc_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(pm::reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(pm::reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
  for (double x : {0.1, 0.35, 0.62, 0.9}) {
    double sym = pm::reg_inc_beta(2.5, 1.5, x) + pm::reg_inc_beta(1.5, 2.5, 1.0 - x);
    CHECK(sym == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(pm::reg_inc_beta(0.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("Student-t CDF against reference values") {
  CHECK(pm::student_t_cdf(3.0, -2.5) == doctest::Approx(0.0438533235040328).epsilon(1e-10));
  CHECK(pm::student_t_cdf(3.0, 0.0) == 0.5);
  CHECK(pm::student_t_cdf(7.5, 1.3) == doctest::Approx(0.883936610592196).epsilon(1e-10));
  CHECK(pm::student_t_cdf(19.2, -0.7) == doctest::Approx(0.246161326559042).epsilon(1e-10));
  CHECK(pm::student_t_cdf(1.0, 4.0) == doctest::Approx(0.922020869622631).epsilon(1e-10));
  CHECK(pm::student_t_cdf(30.0, 2.0) == doctest::Approx(0.972687477518508).epsilon(1e-10));
  CHECK_THROWS_AS(pm::student_t_cdf(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("one-sided Welch test against reference values") {
  std::vector<double> a = {4.1, 3.9, 4.0, 4.2, 3.8, 4.05};
  std::vector<double> b = {5.0, 4.8, 5.3, 4.9, 5.1};
  pm::WelchResult r = pm::welch_one_sided(a, b);
  CHECK(r.t == doctest::Approx(-9.73351538122397).epsilon(1e-9));
  CHECK(r.df == doctest::Approx(7.29111687570414).epsilon(1e-9));
  CHECK(r.p == doctest::Approx(9.76382981885939e-06).epsilon(1e-6));

  std::vector<double> a2 = {10.00246, 10.597491, 9.451724,  8.218816, 9.090658, 8.016707,
                            10.120287, 12.68043,  9.015587,  8.75905,  10.979684, 10.713774};
  std::vector<double> b2 = {11.116243, 8.008596, 10.712245, 12.88591, 6.767356,
                            9.427153,  5.096332, 6.931387,  5.274795};
  pm::WelchResult r2 = pm::welch_one_sided(a2, b2);
  CHECK(r2.t == doctest::Approx(1.35347447914261).epsilon(1e-9));
  CHECK(r2.df == doctest::Approx(10.8347795959628).epsilon(1e-9));
  CHECK(r2.p == doctest::Approx(0.898266976517811).epsilon(1e-9));

  pm::WelchResult r3 = pm::welch_one_sided(b, a);
  CHECK(r3.p == doctest::Approx(0.999990236170181).epsilon(1e-9));
}

TEST_CASE("Welch degenerate and error cases") {
  std::vector<double> flat = {2.0, 2.0, 2.0};
  CHECK(pm::welch_one_sided(flat, flat).p == 0.5);
  CHECK(pm::welch_one_sided({1.0, 1.0}, {2.0, 2.0}).p == 0.0);
  CHECK(pm::welch_one_sided({3.0, 3.0}, {2.0, 2.0}).p == 1.0);
  CHECK_THROWS_AS(pm::welch_one_sided({1.0}, {2.0, 3.0}), std::invalid_argument);
  // Clearly separated samples produce a tiny one-sided p.
  std::vector<double> lo = {1.0, 1.1, 0.9, 1.05};
  std::vector<double> hi = {9.0, 9.2, 8.8, 9.1};
  CHECK(pm::welch_one_sided(lo, hi).p < 1e-6);
}

TEST_CASE("verification budgets at the tabulated settings") {
  pm::WaldBudget b1 = pm::wald_budget(0.025, 10);
  CHECK(b1.per_class == 10512);
  CHECK(b1.total == 105120);
  CHECK(pm::wald_budget(0.05, 10).total == 26300);
  CHECK(pm::wald_budget(0.1, 10).total == 6590);
  CHECK(pm::wald_budget(0.2, 10).total == 1670);
  // The per-class count is the ceiled Wald sample size plus one
  // initialization round per action.
  double n = pm::kZ995 * pm::kZ995 * 0.01 * 0.99 / (0.0025 * 0.0025);
  CHECK(b1.per_class == static_cast<long>(std::ceil(n)) + 2);
}

TEST_CASE("budget validation") {
  CHECK_THROWS_AS(pm::wald_budget(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(pm::wald_budget(1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(pm::wald_budget(0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(pm::wald_budget(0.1, 10, 0.05), std::invalid_argument);
}
