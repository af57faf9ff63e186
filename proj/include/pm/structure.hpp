// Static structure of a game: where each action is optimal (its cell in the
// outcome simplex), which actions are worth distinguishing (neighbor pairs),
// and how their loss gaps can be estimated from feedback alone (observer
// sets, observer vectors, per-action weights).
#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "pm/game.hpp"
#include "pm/lp.hpp"

namespace pm {

enum class ActionKind { kPareto, kDominated, kDegenerate };

enum class GameClass {
  kTrivial,                 // a single Pareto action; nothing to learn
  kLocallyObservable,       // every neighbor gap estimable from its own neighborhood
  kGloballyObservableOnly,  // gaps estimable, but some need far-away actions
  kNotGloballyObservable,   // some gap cannot be estimated at all
};

const char* to_string(ActionKind k);
const char* to_string(GameClass c);

struct NeighborPair {
  int i = 0, j = 0;            // i < j, both Pareto
  std::vector<int> nplus;      // actions whose cells contain C_i intersect C_j
  std::vector<int> observers;  // V_ij: actions contributing to the gap estimate
  bool locally_observable = false;
  bool globally_observable = false;
  // Observer vectors for the ordered pair (i, j), indexed by action; entry a
  // has length sigma_a and is all-zero when the action contributes nothing.
  // The reversed pair (j, i) uses the negated vectors.
  std::vector<Eigen::VectorXd> v;
};

struct GameStructure {
  Game game;
  std::vector<ConstraintSet> cell;  // per action, inside the simplex
  std::vector<ActionKind> kind;
  std::vector<int> pareto;          // ascending
  std::vector<int> dominated;
  std::vector<int> degenerate;
  std::vector<NeighborPair> pairs;  // ascending (i, j)
  std::vector<double> W;            // per action: max over pairs of ||v_ija||_inf
  GameClass cls = GameClass::kTrivial;
  bool normalization_flag = false;  // loss spread exceeds 1

  const NeighborPair* find_pair(int i, int j) const;  // unordered lookup
};

// Constraint set of { p in simplex : action i is loss-minimal at p }.
ConstraintSet cell_of(const Game& g, int action);

// Full derivation. Observer vectors are solved per ordered pair on the
// smallest observer subset (by cardinality, then lexicographic order) whose
// stacked signal spaces span the loss-difference vector; within that subset
// the minimum-2-norm solution is taken. This reproduces the hand-derivable
// vectors of the bundled games and keeps uninformative actions at weight 0.
GameStructure analyze_game(const Game& g);

// Observer vector for the ordered pair (i, j) and action a (negated lookup
// for the reversed orientation). Zero-length pairs throw.
Eigen::VectorXd observer_vector(const GameStructure& s, int i, int j, int a);

// JSON report of every structure field; action indices are 1-based there.
nlohmann::json structure_report(const GameStructure& s);

}  // namespace pm
