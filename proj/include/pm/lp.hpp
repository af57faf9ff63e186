// Small dense linear-programming layer used for polytope queries over the
// outcome simplex: feasibility, support-function extremes, and affine
// dimension. Variables are implicitly nonnegative; every constraint set used
// here lives inside a probability simplex, so problems are always bounded.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace pm {

struct LinRow {
  Eigen::VectorXd a;
  double b = 0.0;
  // `strict` marks rows that encode open half-spaces (a.x < b). The solver
  // cannot express strict inequalities, so such rows are tightened to
  // a.x <= b - strict_slack before solving.
  bool strict = false;
};

struct ConstraintSet {
  int dim = 0;
  std::vector<LinRow> le;  // a.x <= b (or strict)
  std::vector<LinRow> eq;  // a.x == b
  double strict_slack = 1e-7;

  static ConstraintSet simplex(int m);  // { x >= 0, sum x = 1 }

  void add_le(Eigen::VectorXd a, double b, bool strict = false);
  void add_eq(Eigen::VectorXd a, double b);
  // Appends all rows of `other` (dims must match).
  void merge(const ConstraintSet& other);
  // Canonical textual key: identical sets produce identical signatures.
  std::string signature() const;
};

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;
};

// True when { x >= 0 } intersected with the rows of `cs` is nonempty.
bool lp_feasible(const ConstraintSet& cs);

// Extreme of objective.x over the feasible set. Throws std::runtime_error if
// the set is empty or the objective is unbounded over it.
LpResult lp_extremize(const ConstraintSet& cs, const Eigen::VectorXd& objective, bool maximize);

// Dimension of the affine hull of the feasible set; -1 when empty, 0 for a
// single point.
int affine_dimension(const ConstraintSet& cs);

// Memo for repeated feasibility queries on identical constraint sets (the
// per-round plausibility tests hit few distinct sets over a long run).
class FeasibilityCache {
 public:
  bool feasible(const ConstraintSet& cs);
  std::size_t size() const { return memo_.size(); }

 private:
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace pm
