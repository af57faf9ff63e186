// Stochastic environments: fixed-distribution outcome generators, linear
// contextual generators, per-run instance samplers for the bundled games,
// and the classifier-monitoring stream.
#pragma once

#include <Eigen/Dense>

#include "pm/game.hpp"
#include "pm/rng.hpp"

namespace pm {

struct StepOutcome {
  int outcome = 0;       // hidden from strategies; diagnostics only
  int symbol = 0;        // what the strategy observes
  double regret_inc = 0.0;  // (L_action - L_best) . p*, the expected-loss gap
};

// ---- fixed outcome distribution ----

struct BernoulliPmEnv {
  Game game;
  Eigen::VectorXd p_star;
  int opt_action = 0;
  Eigen::VectorXd exp_loss;  // per action, L . p*
};

// Validates p_star: entries >= 0, sums to 1 within 1e-9.
BernoulliPmEnv make_bernoulli_env(Game game, Eigen::VectorXd p_star);

StepOutcome env_step(const BernoulliPmEnv& env, int action, Rng& rng);

// Per-run instance draws for two-outcome games: probability of the first
// outcome. "imbalanced" is uniform on [0, 0.2] union [0.8, 1]; "balanced"
// uniform on [0.4, 0.6].
double sample_two_outcome_p(Rng& rng, bool imbalanced);

// ---- linear contextual outcomes ----

enum class ContextDist { kIidUniform, kOneHot };

struct LinearPmEnv {
  Game game;
  Eigen::MatrixXd theta;  // M x d, nonnegative entries
  ContextDist contexts = ContextDist::kIidUniform;
  int d = 0;
};

LinearPmEnv make_linear_env(Game game, Eigen::MatrixXd theta, ContextDist contexts);

Eigen::VectorXd draw_context(const LinearPmEnv& env, Rng& rng);

// p*(x): theta x divided by its coordinate sum. Throws std::domain_error when
// the sum is not positive (degenerate context for this theta).
Eigen::VectorXd linear_p_star(const LinearPmEnv& env, const Eigen::VectorXd& x);

StepOutcome env_step(const LinearPmEnv& env, const Eigen::VectorXd& x, int action, Rng& rng);

// ---- classifier monitoring stream ----

struct ClassifierStream {
  int n_classes = 0;
  Eigen::VectorXd class_dist;  // distribution of predicted classes
  Eigen::VectorXd p_err;       // per predicted class: P(error | predicted c)
  Eigen::MatrixXd confusion;   // row-stochastic, rows = true classes
  double global_error = 0.0;
};

enum class ClassBalance { kBalanced, kImbalanced };
enum class ErrorProfile { kUniform, kNonuniform };

// Draws a true-class distribution and a row-stochastic confusion matrix, then
// aggregates to the predicted-class view (class_dist, p_err): a prediction
// of c is an error when the true class differs, so p_err[c] marginalizes the
// confusion matrix over the true-class composition of predictions of c.
// Redraws until the global error rate is below 10%. When
// `diagonal_complement` is set, p_err[c] is taken as 1 - confusion[c][c]
// instead of the aggregated rate.
ClassifierStream generate_classifier(int C, ClassBalance balance, ErrorProfile errors, Rng& rng,
                                     bool diagonal_complement = false);

struct StreamDraw {
  int predicted_class = 0;
  bool error = false;
};

StreamDraw stream_step(const ClassifierStream& cs, Rng& rng);

}  // namespace pm
