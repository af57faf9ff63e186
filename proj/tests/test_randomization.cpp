#include <doctest/doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pm/randomization.hpp"
#include "pm/rng.hpp"

using pm::RandomizationConfig;
using pm::Rng;

TEST_CASE("bin grid spans the range with equal spacing") {
  RandomizationConfig cfg;  // K = 5
  auto rho = pm::bin_values(cfg, 2.0);
  REQUIRE(rho.size() == 5);
  CHECK(rho[0] == doctest::Approx(0.0));
  CHECK(rho[1] == doctest::Approx(0.5));
  CHECK(rho[2] == doctest::Approx(1.0));
  CHECK(rho[3] == doctest::Approx(1.5));
  CHECK(rho[4] == doctest::Approx(2.0));
}

TEST_CASE("bin probabilities: half-Gaussian body plus an exact tail") {
  RandomizationConfig cfg;  // K = 5, eps = 1e-7, sigma = 1, A = 0
  auto p = pm::bin_probabilities(cfg, 2.0);
  REQUIRE(p.size() == 5);
  CHECK(p[0] == doctest::Approx(0.35541).epsilon(5e-4));
  CHECK(p[1] == doctest::Approx(0.31365).epsilon(5e-4));
  CHECK(p[2] == doctest::Approx(0.21556).epsilon(5e-4));
  CHECK(p[3] == doctest::Approx(0.11538).epsilon(5e-4));
  CHECK(std::abs(p[4] - cfg.eps) <= 1e-12);
  double sum = 0.0;
  for (double x : p) sum += x;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  // Body bins keep the Gaussian likelihood ratios exactly.
  CHECK(p[0] / p[1] == doctest::Approx(std::exp(0.125)).epsilon(1e-12));
  CHECK(p[1] / p[2] == doctest::Approx(std::exp(0.375)).epsilon(1e-12));
}

TEST_CASE("a large tail mass shifts draws to the top bin") {
  RandomizationConfig cfg;
  cfg.eps = 0.9;
  auto p = pm::bin_probabilities(cfg, 2.0);
  CHECK(p[4] == doctest::Approx(0.9).epsilon(1e-12));
  Rng rng(7);
  int top = 0;
  for (int k = 0; k < 2000; ++k)
    if (pm::sample_z(cfg, 2.0, rng) == 2.0) ++top;
  CHECK(top > 1600);
}

TEST_CASE("single-bin and degenerate ranges collapse to the deterministic bound") {
  RandomizationConfig one;
  one.K = 1;
  Rng rng(3);
  for (int k = 0; k < 50; ++k) CHECK(pm::sample_z(one, 1.7, rng) == 1.7);
  CHECK(pm::bin_probabilities(one, 1.7) == std::vector<double>{1.0});

  RandomizationConfig cfg;  // K = 5 but B <= A
  cfg.A = 2.0;
  CHECK(pm::sample_z(cfg, 1.5, rng) == 1.5);
  CHECK(pm::sample_z(cfg, 2.0, rng) == 2.0);
}

TEST_CASE("empirical frequencies match the closed form") {
  RandomizationConfig cfg;
  auto rho = pm::bin_values(cfg, 2.0);
  auto p = pm::bin_probabilities(cfg, 2.0);
  Rng rng(123456);
  const int n = 200000;
  std::vector<int> hits(5, 0);
  for (int k = 0; k < n; ++k) {
    double z = pm::sample_z(cfg, 2.0, rng);
    for (int b = 0; b < 5; ++b)
      if (z == rho[b]) {
        ++hits[b];
        break;
      }
  }
  double tv = 0.0;
  for (int b = 0; b < 5; ++b) tv += std::abs(static_cast<double>(hits[b]) / n - p[b]);
  CHECK(tv / 2.0 <= 5e-3);
}

TEST_CASE("draws are reproducible from the seed") {
  RandomizationConfig cfg;
  Rng a(99), b(99);
  for (int k = 0; k < 100; ++k) CHECK(pm::sample_z(cfg, 2.0, a) == pm::sample_z(cfg, 2.0, b));
}

TEST_CASE("parameter validation") {
  RandomizationConfig cfg;
  cfg.K = 0;
  CHECK_THROWS_AS(pm::check_randomization(cfg), std::invalid_argument);
  cfg = {};
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(pm::check_randomization(cfg), std::invalid_argument);
  cfg = {};
  cfg.eps = 0.0;
  CHECK_THROWS_AS(pm::check_randomization(cfg), std::invalid_argument);
  cfg = {};
  cfg.eps = 1.0;
  CHECK_THROWS_AS(pm::check_randomization(cfg), std::invalid_argument);
}
