#include "pm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pm {

namespace {

constexpr double kPivotTol = 1e-9;

// Dense phase-1/phase-2 tableau simplex over { A x (<=|==) b, x >= 0 } with
// Bland's rule throughout, so it cannot cycle. Problem sizes here are tiny
// (a handful of variables and rows), so the dense tableau is the simplest
// reliable choice.
class Tableau {
 public:
  Tableau(const ConstraintSet& cs) : n_(cs.dim) {
    m_ = static_cast<int>(cs.le.size() + cs.eq.size());
    n_slack_ = static_cast<int>(cs.le.size());
    cols_ = n_ + n_slack_ + m_;  // structural + slack + artificial
    art0_ = n_ + n_slack_;
    T_.assign(m_ + 1, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m_, -1);

    int r = 0;
    for (const auto& row : cs.le) {
      double rhs = row.b - (row.strict ? cs.strict_slack : 0.0);
      for (int j = 0; j < n_; ++j) T_[r][j] = row.a(j);
      T_[r][n_ + r] = 1.0;  // slack
      T_[r][cols_] = rhs;
      ++r;
    }
    for (const auto& row : cs.eq) {
      for (int j = 0; j < n_; ++j) T_[r][j] = row.a(j);
      T_[r][cols_] = row.b;
      ++r;
    }
    // Make every right-hand side nonnegative, then give each row an
    // artificial basic variable.
    for (int i = 0; i < m_; ++i) {
      if (T_[i][cols_] < 0.0)
        for (int j = 0; j <= cols_; ++j) T_[i][j] = -T_[i][j];
      T_[i][art0_ + i] = 1.0;
      basis_[i] = art0_ + i;
    }
  }

  // Returns false when the constraints are infeasible.
  bool phase1() {
    // Objective: minimize the sum of artificials.
    std::vector<double> c(cols_, 0.0);
    for (int j = art0_; j < cols_; ++j) c[j] = 1.0;
    set_objective(c);
    iterate(/*allow_artificial=*/true);
    // The acceptance threshold must sit well below the strict-row slack, or a
    // constraint violated by exactly the slack would still be accepted.
    if (objective_value(c) > 1e-9 * scale_) return false;
    // Pivot lingering artificials out of the basis where possible; rows where
    // no structural pivot exists are redundant and their artificial stays at
    // zero (phase 2 never lets it re-enter).
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art0_) continue;
      for (int j = 0; j < art0_; ++j) {
        if (std::abs(T_[i][j]) > kPivotTol) {
          pivot(i, j);
          break;
        }
      }
    }
    return true;
  }

  // Minimizes c.x; call after a successful phase1. Returns false if unbounded.
  bool phase2(const std::vector<double>& c_structural) {
    std::vector<double> c(cols_, 0.0);
    for (int j = 0; j < n_; ++j) c[j] = c_structural[j];
    set_objective(c);
    return iterate(/*allow_artificial=*/false);
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x(basis_[i]) = T_[i][cols_];
    return x;
  }

 private:
  void set_objective(const std::vector<double>& c) {
    scale_ = 1.0;
    for (int i = 0; i < m_; ++i) scale_ = std::max(scale_, std::abs(T_[i][cols_]));
    for (int j = 0; j < cols_; ++j) T_[m_][j] = c[j];
    T_[m_][cols_] = 0.0;
    // Price out the current basis so reduced costs are consistent.
    for (int i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) T_[m_][j] -= cb * T_[i][j];
    }
  }

  double objective_value(const std::vector<double>& c) const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += c[basis_[i]] * T_[i][cols_];
    return v;
  }

  bool iterate(bool allow_artificial) {
    int limit = allow_artificial ? cols_ : art0_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (T_[m_][j] < -kPivotTol) {
          enter = j;  // Bland: lowest eligible index
          break;
        }
      }
      if (enter < 0) return true;  // optimal
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (T_[i][enter] > kPivotTol) {
          double ratio = T_[i][cols_] / T_[i][enter];
          if (leave < 0 || ratio < best - kPivotTol ||
              (ratio < best + kPivotTol && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    double p = T_[row][col];
    for (int j = 0; j <= cols_; ++j) T_[row][j] /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double f = T_[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) T_[i][j] -= f * T_[row][j];
    }
    basis_[row] = col;
  }

  int n_, m_, n_slack_, cols_, art0_;
  double scale_ = 1.0;
  std::vector<std::vector<double>> T_;
  std::vector<int> basis_;
};

void check_set(const ConstraintSet& cs) {
  if (cs.dim <= 0) throw std::invalid_argument("ConstraintSet: dimension must be positive");
  for (const auto& row : cs.le)
    if (row.a.size() != cs.dim) throw std::invalid_argument("ConstraintSet: row dimension mismatch");
  for (const auto& row : cs.eq)
    if (row.a.size() != cs.dim) throw std::invalid_argument("ConstraintSet: row dimension mismatch");
}

}  // namespace

ConstraintSet ConstraintSet::simplex(int m) {
  if (m <= 0) throw std::invalid_argument("simplex: dimension must be positive");
  ConstraintSet cs;
  cs.dim = m;
  cs.add_eq(Eigen::VectorXd::Ones(m), 1.0);
  return cs;
}

void ConstraintSet::add_le(Eigen::VectorXd a, double b, bool strict) {
  le.push_back({std::move(a), b, strict});
}

void ConstraintSet::add_eq(Eigen::VectorXd a, double b) { eq.push_back({std::move(a), b, false}); }

void ConstraintSet::merge(const ConstraintSet& other) {
  if (other.dim != dim) throw std::invalid_argument("ConstraintSet::merge: dimension mismatch");
  le.insert(le.end(), other.le.begin(), other.le.end());
  eq.insert(eq.end(), other.eq.begin(), other.eq.end());
}

std::string ConstraintSet::signature() const {
  std::string s;
  char buf[64];
  std::snprintf(buf, sizeof buf, "d%d;s%.12g", dim, strict_slack);
  s += buf;
  auto row_sig = [&](const LinRow& r, char tag) {
    s += '|';
    s += tag;
    if (r.strict) s += '!';
    for (int j = 0; j < r.a.size(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.12g", r.a(j));
      s += buf;
    }
    std::snprintf(buf, sizeof buf, ":%.12g", r.b);
    s += buf;
  };
  for (const auto& r : le) row_sig(r, 'L');
  for (const auto& r : eq) row_sig(r, 'E');
  return s;
}

bool lp_feasible(const ConstraintSet& cs) {
  check_set(cs);
  Tableau t(cs);
  return t.phase1();
}

LpResult lp_extremize(const ConstraintSet& cs, const Eigen::VectorXd& objective, bool maximize) {
  check_set(cs);
  if (objective.size() != cs.dim) throw std::invalid_argument("lp_extremize: objective dimension mismatch");
  Tableau t(cs);
  if (!t.phase1()) throw std::runtime_error("lp_extremize: infeasible constraint set");
  std::vector<double> c(cs.dim);
  for (int j = 0; j < cs.dim; ++j) c[j] = maximize ? -objective(j) : objective(j);
  if (!t.phase2(c)) throw std::runtime_error("lp_extremize: objective unbounded over feasible set");
  LpResult res;
  res.feasible = true;
  res.x = t.solution();
  res.value = objective.dot(res.x);
  return res;
}

int affine_dimension(const ConstraintSet& cs) {
  check_set(cs);
  if (!lp_feasible(cs)) return -1;
  const int d = cs.dim;
  // Base point; any feasible vertex will do.
  Eigen::VectorXd w = lp_extremize(cs, Eigen::VectorXd::Zero(d), true).x;
  // Orthonormal basis of the affine-hull direction space found so far.
  Eigen::MatrixXd Q(d, 0);
  auto project_out = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (Q.cols() == 0) return v;
    return v - Q * (Q.transpose() * v);
  };
  // Repeatedly probe coordinate directions projected off the known basis;
  // an extreme point whose displacement leaves span(Q) extends the basis.
  // Once no probe escapes, every feasible displacement lies in span(Q).
  bool grew = true;
  while (grew && Q.cols() < d) {
    grew = false;
    for (int i = 0; i < d && Q.cols() < d; ++i) {
      Eigen::VectorXd obj = project_out(Eigen::VectorXd::Unit(d, i));
      if (obj.norm() < 1e-9) continue;
      for (bool maximize : {true, false}) {
        Eigen::VectorXd v = lp_extremize(cs, obj, maximize).x - w;
        Eigen::VectorXd perp = project_out(v);
        double nv = perp.norm();
        if (nv > 1e-7 * std::max(1.0, v.norm())) {
          Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
          Q.col(Q.cols() - 1) = perp / nv;
          grew = true;
        }
      }
    }
  }
  return static_cast<int>(Q.cols());
}

bool FeasibilityCache::feasible(const ConstraintSet& cs) {
  std::string key = cs.signature();
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool ok = lp_feasible(cs);
  memo_.emplace(std::move(key), ok);
  return ok;
}

}  // namespace pm
