// Successive-elimination strategy for finite stochastic games without side
// information. Maintains per-action symbol tallies, estimates pairwise loss
// gaps through the observer vectors, and eliminates pair orientations whose
// estimate clears a confidence width. The width scale is either the
// deterministic sqrt(alpha log t) or a randomized draw below it.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "pm/randomization.hpp"
#include "pm/rng.hpp"
#include "pm/structure.hpp"

namespace pm {

struct CbpConfig {
  double alpha = 1.01;      // confidence-level exponent in widths and f(t)
  bool randomized = false;  // true: draw the width scale each round
  RandomizationConfig rand;
};

// A confidently signed neighbor pair: the estimate of loss(i) - loss(j) for
// pairs[pair_index] exceeds its width with the stored sign.
struct SignedPair {
  int pair_index = 0;
  int sign = 0;  // +1 or -1
};

struct PlausibleSets {
  std::vector<int> plausible;     // Pareto actions still compatible
  std::vector<int> pair_indices;  // neighbor pairs still compatible
  bool fallback = false;          // constraints were contradictory this round
};

struct CbpState {
  const GameStructure* structure = nullptr;
  CbpConfig cfg;
  long t = 0;  // rounds completed
  std::vector<long> counts;                 // n_a
  std::vector<Eigen::VectorXd> tallies;     // per action, symbol counts
  long confidence_failures = 0;             // rounds the fallback fired
  std::unordered_map<std::string, PlausibleSets> plausible_memo;
};

// Throws unless the structure is usable: at least globally observable and a
// positive number of actions.
CbpState make_cbp(const GameStructure& s, CbpConfig cfg);

// Exploration budget f(t) = alpha^{1/3} t^{2/3} (ln t)^{1/3} and the
// per-action threshold multiplier eta_a = W_a^{2/3}.
double explore_budget(double alpha, long t);

// Gap estimate for the ordered pair (pair.i, pair.j) from current tallies.
double delta_hat(const CbpState& st, const NeighborPair& pair);

// Confidence width c_ij given a scale z: sum over observers of
// ||v_ija||_inf * z / sqrt(n_a).
double confidence_width(const CbpState& st, const NeighborPair& pair, double z);

// Open half-spaces induced by the signed pairs (no simplex rows; merge onto
// cells before solving).
ConstraintSet build_halfspaces(const GameStructure& s, const std::vector<SignedPair>& signed_pairs);

// Pareto actions and neighbor pairs whose cells still meet the constrained
// region. A contradictory region (nothing survives) returns the full sets
// with `fallback` set; the caller counts a confidence failure. Results are
// memoized per signed-pair pattern.
PlausibleSets plausible_sets(CbpState& st, const std::vector<SignedPair>& signed_pairs);

// Same computation against an external memo; shared with the contextual
// strategy, which keeps its own cache.
PlausibleSets solve_plausible(const GameStructure& s, const std::vector<SignedPair>& signed_pairs,
                              std::unordered_map<std::string, PlausibleSets>& memo);

// One decision. Rounds 1..N play each action once; afterwards the action is
// the highest-uncertainty member (W_a^2 / n_a, lowest index on ties) of the
// union of plausible actions, their pair neighborhoods, and the
// underexplored observers. Advances t; follow with cbp_update.
int cbp_step(CbpState& st, Rng& rng);

// Record the observed symbol for the played action.
void cbp_update(CbpState& st, int action, int symbol);

}  // namespace pm
