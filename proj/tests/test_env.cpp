#include <doctest/doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pm/env.hpp"
#include "pm/rng.hpp"

using pm::ClassBalance;
using pm::ErrorProfile;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd v2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("fixed-distribution environment validates its parameters") {
  pm::Game at = pm::apple_tasting();
  CHECK_THROWS_AS(pm::make_bernoulli_env(at, VectorXd::Ones(3) / 3.0), std::invalid_argument);
  CHECK_THROWS_AS(pm::make_bernoulli_env(at, v2(-0.1, 1.1)), std::invalid_argument);
  CHECK_THROWS_AS(pm::make_bernoulli_env(at, v2(0.6, 0.6)), std::invalid_argument);
  CHECK_NOTHROW(pm::make_bernoulli_env(at, v2(0.3, 0.7)));
}

TEST_CASE("a degenerate distribution produces constant feedback and zero optimal regret") {
  pm::BernoulliPmEnv env = pm::make_bernoulli_env(pm::apple_tasting(), v2(1.0, 0.0));
  CHECK(env.opt_action == 1);
  pm::Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    pm::StepOutcome reveal = pm::env_step(env, 1, rng);
    CHECK(reveal.outcome == 0);
    CHECK(reveal.symbol == 0);
    CHECK(reveal.regret_inc == 0.0);
    pm::StepOutcome blind = pm::env_step(env, 0, rng);
    CHECK(blind.symbol == 0);
    CHECK(blind.regret_inc == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(pm::env_step(env, 2, rng), std::out_of_range);
}

TEST_CASE("outcome frequencies follow the distribution") {
  pm::BernoulliPmEnv env = pm::make_bernoulli_env(pm::apple_tasting(), v2(0.3, 0.7));
  pm::Rng rng(1234);
  const int n = 100000;
  int first = 0;
  for (int k = 0; k < n; ++k) first += pm::env_step(env, 0, rng).outcome == 0;
  double freq = static_cast<double>(first) / n;
  CHECK(freq == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("instance draws stay inside their bands") {
  pm::Rng rng(5);
  bool low = false, high = false;
  for (int k = 0; k < 1000; ++k) {
    double p = pm::sample_two_outcome_p(rng, /*imbalanced=*/true);
    bool in_low = p >= 0.0 && p <= 0.2;
    bool in_high = p >= 0.8 && p <= 1.0;
    CHECK((in_low || in_high));
    low = low || in_low;
    high = high || in_high;
  }
  CHECK(low);
  CHECK(high);
  for (int k = 0; k < 1000; ++k) {
    double p = pm::sample_two_outcome_p(rng, /*imbalanced=*/false);
    CHECK(p >= 0.4);
    CHECK(p <= 0.6);
  }
}

TEST_CASE("linear environment validation and normalization") {
  pm::Game at = pm::apple_tasting();
  MatrixXd bad = MatrixXd::Constant(3, 2, 0.1);
  CHECK_THROWS_AS(pm::make_linear_env(at, bad, pm::ContextDist::kIidUniform),
                  std::invalid_argument);
  MatrixXd neg = MatrixXd::Constant(2, 2, 0.1);
  neg(0, 0) = -0.1;
  CHECK_THROWS_AS(pm::make_linear_env(at, neg, pm::ContextDist::kIidUniform),
                  std::invalid_argument);

  pm::LinearPmEnv env =
      pm::make_linear_env(at, MatrixXd::Constant(2, 5, 0.1), pm::ContextDist::kIidUniform);
  pm::Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    VectorXd x = pm::draw_context(env, rng);
    REQUIRE(x.size() == 5);
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() < 1.0);
    VectorXd p = pm::linear_p_star(env, x);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // Constant theta rows weight every outcome equally.
    CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(pm::linear_p_star(env, VectorXd::Zero(5)), std::domain_error);
}

TEST_CASE("one-hot contexts select theta columns") {
  pm::Game at = pm::apple_tasting();
  const int d = 4;
  MatrixXd theta(2, d);
  for (int j = 0; j < d; ++j) {
    theta(0, j) = (j + 0.5) / d;
    theta(1, j) = 1.0 - (j + 0.5) / d;
  }
  pm::LinearPmEnv env = pm::make_linear_env(at, theta, pm::ContextDist::kOneHot);
  pm::Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    VectorXd x = pm::draw_context(env, rng);
    CHECK(x.sum() == doctest::Approx(1.0));
    CHECK(x.maxCoeff() == 1.0);
    int j = 0;
    x.maxCoeff(&j);
    VectorXd p = pm::linear_p_star(env, x);
    CHECK(p(0) == doctest::Approx((j + 0.5) / d).epsilon(1e-12));
  }
  // The optimal action flips across columns, so regret is column-dependent.
  VectorXd first = VectorXd::Zero(d), last = VectorXd::Zero(d);
  first(0) = 1.0;
  last(d - 1) = 1.0;
  CHECK(pm::env_step(env, first, 0, rng).regret_inc == doctest::Approx(0.0));
  CHECK(pm::env_step(env, last, 1, rng).regret_inc == doctest::Approx(0.0));
  double spread = (d - 1.0) / d;  // p_A(last) - p_B(last)
  CHECK(pm::env_step(env, last, 0, rng).regret_inc == doctest::Approx(spread).epsilon(1e-9));
}

TEST_CASE("classifier generation: balanced classes with a uniform error rate") {
  pm::Rng rng(2025);
  pm::ClassifierStream cs =
      pm::generate_classifier(10, ClassBalance::kBalanced, ErrorProfile::kUniform, rng);
  REQUIRE(cs.n_classes == 10);
  CHECK(cs.class_dist.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 0; j < 10; ++j)
    CHECK(cs.class_dist(j) == doctest::Approx(0.1).epsilon(1e-12));
  // Aggregated per-class error equals the shared rate, inside its band.
  double eps = cs.p_err(0);
  CHECK(eps >= 0.02);
  CHECK(eps <= 0.09);
  for (int j = 0; j < 10; ++j) CHECK(cs.p_err(j) == doctest::Approx(eps).epsilon(1e-9));
  CHECK(cs.global_error == doctest::Approx(eps).epsilon(1e-9));
  CHECK(cs.global_error < 0.10);
  for (int c = 0; c < 10; ++c)
    CHECK(cs.confusion.row(c).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classifier generation: imbalance and heterogeneous errors") {
  pm::Rng rng(31);
  pm::ClassifierStream cs =
      pm::generate_classifier(10, ClassBalance::kImbalanced, ErrorProfile::kNonuniform, rng);
  CHECK(cs.class_dist.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cs.class_dist.maxCoeff() > cs.class_dist.minCoeff() + 0.01);
  CHECK(cs.global_error < 0.10);
  CHECK(cs.p_err.maxCoeff() <= 1.0);
  CHECK(cs.p_err.minCoeff() >= 0.0);

  // Complement mode reads the error straight off the confusion diagonal.
  pm::Rng rng2(31);
  pm::ClassifierStream dc = pm::generate_classifier(10, ClassBalance::kImbalanced,
                                                    ErrorProfile::kNonuniform, rng2, true);
  for (int j = 0; j < 10; ++j)
    CHECK(dc.p_err(j) == doctest::Approx(1.0 - dc.confusion(j, j)).epsilon(1e-12));
  CHECK(dc.p_err.maxCoeff() <= 0.45 + 1e-12);
  bool hetero = false;
  for (int j = 1; j < 10; ++j) hetero = hetero || std::abs(dc.p_err(j) - dc.p_err(0)) > 1e-6;
  CHECK(hetero);
}

TEST_CASE("classifier generation is reproducible and validated") {
  pm::Rng a(7), b(7);
  pm::ClassifierStream ca =
      pm::generate_classifier(5, ClassBalance::kImbalanced, ErrorProfile::kUniform, a);
  pm::ClassifierStream cb =
      pm::generate_classifier(5, ClassBalance::kImbalanced, ErrorProfile::kUniform, b);
  CHECK((ca.class_dist - cb.class_dist).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((ca.p_err - cb.p_err).lpNorm<Eigen::Infinity>() == 0.0);
  pm::Rng c(1);
  CHECK_THROWS_AS(pm::generate_classifier(0, ClassBalance::kBalanced, ErrorProfile::kUniform, c),
                  std::invalid_argument);
}

TEST_CASE("stream draws follow the predicted-class marginal and error rates") {
  pm::ClassifierStream cs;
  cs.n_classes = 2;
  cs.class_dist = v2(0.5, 0.5);
  cs.p_err = v2(0.0, 1.0);
  cs.confusion = MatrixXd::Identity(2, 2);
  cs.global_error = 0.5;
  pm::Rng rng(40);
  int seen0 = 0;
  for (int k = 0; k < 20000; ++k) {
    pm::StreamDraw d = pm::stream_step(cs, rng);
    if (d.predicted_class == 0) {
      ++seen0;
      CHECK_FALSE(d.error);
    } else {
      CHECK(d.error);
    }
  }
  CHECK(static_cast<double>(seen0) / 20000 == doctest::Approx(0.5).epsilon(0.05));
}
