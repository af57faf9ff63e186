#include "pm/env.hpp"

#include <cmath>
#include <stdexcept>

namespace pm {

namespace {

int sample_from(const Eigen::VectorXd& p, Rng& rng) {
  double u = rng.uniform01() * p.sum();
  double acc = 0.0;
  int last = 0;
  for (int k = 0; k < p.size(); ++k) {
    if (p(k) <= 0.0) continue;
    acc += p(k);
    last = k;
    if (u < acc) return last;
  }
  return last;
}

double standard_normal(Rng& rng) {
  double u1 = 1.0 - rng.uniform01();  // (0, 1]
  double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Symmetric Dirichlet(1/2) via normalized half-chi-square draws.
Eigen::VectorXd dirichlet_half(int n, Rng& rng) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    double z = standard_normal(rng);
    g(i) = 0.5 * z * z;
  }
  double s = g.sum();
  if (s <= 0.0) return Eigen::VectorXd::Constant(n, 1.0 / n);
  return g / s;
}

int best_action(const Game& game, const Eigen::VectorXd& p_star, Eigen::VectorXd* exp_loss_out) {
  Eigen::VectorXd exp_loss = game.loss * p_star;
  int opt = 0;
  exp_loss.minCoeff(&opt);
  if (exp_loss_out) *exp_loss_out = std::move(exp_loss);
  return opt;
}

}  // namespace

BernoulliPmEnv make_bernoulli_env(Game game, Eigen::VectorXd p_star) {
  if (p_star.size() != game.n_outcomes())
    throw std::invalid_argument("make_bernoulli_env: p_star dimension mismatch");
  if (p_star.minCoeff() < 0.0) throw std::invalid_argument("make_bernoulli_env: negative probability");
  if (std::abs(p_star.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("make_bernoulli_env: probabilities must sum to 1");
  BernoulliPmEnv env;
  env.game = std::move(game);
  env.p_star = std::move(p_star);
  env.opt_action = best_action(env.game, env.p_star, &env.exp_loss);
  return env;
}

StepOutcome env_step(const BernoulliPmEnv& env, int action, Rng& rng) {
  if (action < 0 || action >= env.game.n_actions()) throw std::out_of_range("env_step: action");
  StepOutcome out;
  out.outcome = sample_from(env.p_star, rng);
  out.symbol = env.game.symbol_index[action][out.outcome];
  out.regret_inc = env.exp_loss(action) - env.exp_loss(env.opt_action);
  return out;
}

double sample_two_outcome_p(Rng& rng, bool imbalanced) {
  double u = rng.uniform01();
  if (!imbalanced) return 0.4 + 0.2 * u;
  return u < 0.5 ? 0.4 * u : 0.8 + 0.4 * (u - 0.5);
}

LinearPmEnv make_linear_env(Game game, Eigen::MatrixXd theta, ContextDist contexts) {
  if (theta.rows() != game.n_outcomes())
    throw std::invalid_argument("make_linear_env: theta rows must match outcomes");
  if (theta.cols() < 1) throw std::invalid_argument("make_linear_env: empty context dimension");
  if (theta.minCoeff() < 0.0)
    throw std::invalid_argument("make_linear_env: theta entries must be nonnegative");
  LinearPmEnv env;
  env.game = std::move(game);
  env.d = static_cast<int>(theta.cols());
  env.theta = std::move(theta);
  env.contexts = contexts;
  return env;
}

Eigen::VectorXd draw_context(const LinearPmEnv& env, Rng& rng) {
  if (env.contexts == ContextDist::kOneHot) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(env.d);
    x(rng.uniform_int(env.d)) = 1.0;
    return x;
  }
  Eigen::VectorXd x(env.d);
  for (int i = 0; i < env.d; ++i) x(i) = rng.uniform01();
  return x;
}

Eigen::VectorXd linear_p_star(const LinearPmEnv& env, const Eigen::VectorXd& x) {
  if (x.size() != env.d) throw std::invalid_argument("linear_p_star: context dimension mismatch");
  Eigen::VectorXd v = env.theta * x;
  double s = v.sum();
  if (s <= 1e-12) throw std::domain_error("linear_p_star: context maps to a non-positive mass");
  return v / s;
}

StepOutcome env_step(const LinearPmEnv& env, const Eigen::VectorXd& x, int action, Rng& rng) {
  if (action < 0 || action >= env.game.n_actions()) throw std::out_of_range("env_step: action");
  Eigen::VectorXd p = linear_p_star(env, x);
  Eigen::VectorXd exp_loss;
  int opt = best_action(env.game, p, &exp_loss);
  StepOutcome out;
  out.outcome = sample_from(p, rng);
  out.symbol = env.game.symbol_index[action][out.outcome];
  out.regret_inc = exp_loss(action) - exp_loss(opt);
  return out;
}

ClassifierStream generate_classifier(int C, ClassBalance balance, ErrorProfile errors, Rng& rng,
                                     bool diagonal_complement) {
  if (C < 1) throw std::invalid_argument("generate_classifier: need at least one class");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::VectorXd true_dist = balance == ClassBalance::kBalanced
                                    ? Eigen::VectorXd::Constant(C, 1.0 / C)
                                    : dirichlet_half(C, rng);

    Eigen::VectorXd eps(C);
    if (errors == ErrorProfile::kUniform) {
      eps.setConstant(rng.uniform(0.02, 0.09));
    } else {
      double budget = rng.uniform(0.02, 0.09);
      Eigen::VectorXd w = dirichlet_half(C, rng);
      for (int c = 0; c < C; ++c) eps(c) = std::min(budget * C * w(c), 0.45);
    }

    Eigen::MatrixXd conf = Eigen::MatrixXd::Zero(C, C);
    for (int c = 0; c < C; ++c) {
      double off = C > 1 ? eps(c) / (C - 1) : 0.0;
      conf.row(c).setConstant(off);
      conf(c, c) = 1.0 - eps(c);
    }

    ClassifierStream cs;
    cs.n_classes = C;
    cs.confusion = conf;
    cs.class_dist = conf.transpose() * true_dist;  // predicted-class marginal
    cs.p_err = Eigen::VectorXd::Zero(C);
    for (int j = 0; j < C; ++j) {
      if (diagonal_complement) {
        cs.p_err(j) = 1.0 - conf(j, j);
      } else if (cs.class_dist(j) > 0.0) {
        // Fraction of predictions of j whose true class differs.
        cs.p_err(j) = 1.0 - true_dist(j) * conf(j, j) / cs.class_dist(j);
      }
    }
    cs.global_error = cs.class_dist.dot(
        (Eigen::VectorXd::Ones(C) - conf.diagonal()).eval());
    if (cs.global_error < 0.10) return cs;
  }
  throw std::runtime_error("generate_classifier: could not satisfy the error budget");
}

StreamDraw stream_step(const ClassifierStream& cs, Rng& rng) {
  StreamDraw d;
  d.predicted_class = sample_from(cs.class_dist, rng);
  d.error = rng.bernoulli(cs.p_err(d.predicted_class));
  return d;
}

}  // namespace pm
