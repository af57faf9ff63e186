// Contextual variant: before each round the learner sees a side-information
// vector x, and outcome distributions depend linearly on it. Each action
// keeps a ridge regression from contexts to its observed symbol frequencies;
// gap estimates and confidence widths are evaluated at the current context,
// and exploration is budgeted by Gram-matrix pseudo-counts instead of raw
// play counts.
#pragma once

#include <unordered_map>
#include <vector>

#include "pm/cbp.hpp"
#include "pm/structure.hpp"

namespace pm {

struct CbpSideConfig {
  double alpha = 1.01;    // exploration-budget exponent, as in the base game
  double lambda = 0.05;   // ridge regularizer
  bool randomized = false;
  RandomizationConfig rand;
};

struct CbpSideState {
  const GameStructure* structure = nullptr;
  CbpSideConfig cfg;
  int d = 0;   // context dimension
  long t = 0;  // rounds completed
  std::vector<Eigen::MatrixXd> B;     // per action: sigma_a x d accumulator
  std::vector<Eigen::MatrixXd> Ginv;  // per action: inverse Gram, maintained incrementally
  std::vector<Eigen::MatrixXd> G;     // per action: dense Gram, kept to audit the inverse
  std::vector<long> counts;           // raw play counts
  long confidence_failures = 0;
  std::unordered_map<std::string, PlausibleSets> plausible_memo;
};

CbpSideState make_cbpside(const GameStructure& s, int d, CbpSideConfig cfg);

// Estimated symbol distribution of action a at context x: B_a G_a^{-1} x.
Eigen::VectorXd predict_pi(const CbpSideState& st, int a, const Eigen::VectorXd& x);

// ||x|| in the G_a^{-1} metric.
double context_norm(const CbpSideState& st, int a, const Eigen::VectorXd& x);

// Per-action width at scale z: sigma_a (z + sigma_a) ||x||_{G_a^{-1}}.
double contextual_width(const CbpSideState& st, int a, const Eigen::VectorXd& x, double z);

// Effective number of observations action a has made in direction x:
// 1 / ||x||^2_{G_a^{-1}}; +infinity at x = 0. Equals lambda + (times played)
// when contexts are one-hot and x was the played coordinate.
double pseudo_count(const CbpSideState& st, int a, const Eigen::VectorXd& x);

// Gap estimate for the ordered pair at context x, through observer vectors.
double delta_hat_side(const CbpSideState& st, const NeighborPair& pair, const Eigen::VectorXd& x);

// One decision at context x. Rounds 1..N initialize; afterwards confident
// pairs (|gap| > sum over observers of ||v||_2 * width) shape the plausible
// sets exactly as in the non-contextual strategy, the underexplored set uses
// pseudo-counts, and the played action maximizes W_a * width_a(x) over the
// candidate union (lowest index on ties). Advances t.
int cbpside_step(CbpSideState& st, const Eigen::VectorXd& x, Rng& rng);

// Record the observed symbol; only the played action's regression moves.
void cbpside_update(CbpSideState& st, const Eigen::VectorXd& x, int action, int symbol);

// ||G_a^{-1} G_a - I||_inf: accumulated error of the incremental inverse.
double gram_drift(const CbpSideState& st, int a);

}  // namespace pm
