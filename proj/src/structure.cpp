#include "pm/structure.hpp"

#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "pm/linalg.hpp"

namespace pm {

namespace {

constexpr double kIncludeTol = 1e-9;

// Is A a subset of B? Both polytopes share the simplex equality; inclusion
// holds iff no inequality row of B can be violated anywhere on A.
bool cell_subset(const ConstraintSet& a, const ConstraintSet& b) {
  for (const auto& row : b.le) {
    LpResult r = lp_extremize(a, row.a, /*maximize=*/true);
    if (r.value > row.b + kIncludeTol) return false;
  }
  return true;
}

// Enumerate k-subsets of `pool` in lexicographic order, calling fn(subset)
// until it returns true; returns whether any call succeeded.
bool for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<bool(const std::vector<int>&)>& fn) {
  const int n = static_cast<int>(pool.size());
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(k);
  for (;;) {
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    if (fn(subset)) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Loss-difference vector (L_i - L_j)^T as a column.
Eigen::VectorXd loss_gap(const Game& g, int i, int j) {
  return (g.loss.row(i) - g.loss.row(j)).transpose();
}

std::vector<Eigen::MatrixXd> signal_blocks(const Game& g, const std::vector<int>& actions) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(actions.size());
  for (int a : actions) blocks.push_back(g.signal[a].transpose());
  return blocks;
}

// Smallest observer subset (cardinality first, then lexicographic) able to
// express the gap, plus the min-norm coefficients on it. Returns false when
// even the full pool cannot express the gap.
bool solve_observers(const Game& g, const std::vector<int>& pool, const Eigen::VectorXd& gap,
                     std::vector<Eigen::VectorXd>& v_out) {
  for (int k = 1; k <= static_cast<int>(pool.size()); ++k) {
    bool found = for_each_subset(pool, k, [&](const std::vector<int>& subset) {
      if (!in_direct_sum(gap, signal_blocks(g, subset))) return false;
      long cols = 0;
      for (int a : subset) cols += g.sigma[a];
      Eigen::MatrixXd G(g.n_outcomes(), cols);
      long at = 0;
      for (int a : subset) {
        G.middleCols(at, g.sigma[a]) = g.signal[a].transpose();
        at += g.sigma[a];
      }
      Eigen::VectorXd x = least_norm_solve(G, gap);
      at = 0;
      for (int a : subset) {
        v_out[a] = x.segment(at, g.sigma[a]);
        at += g.sigma[a];
      }
      return true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::kPareto: return "pareto";
    case ActionKind::kDominated: return "dominated";
    case ActionKind::kDegenerate: return "degenerate";
  }
  return "?";
}

const char* to_string(GameClass c) {
  switch (c) {
    case GameClass::kTrivial: return "trivial";
    case GameClass::kLocallyObservable: return "locally_observable";
    case GameClass::kGloballyObservableOnly: return "globally_observable_only";
    case GameClass::kNotGloballyObservable: return "not_globally_observable";
  }
  return "?";
}

const NeighborPair* GameStructure::find_pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& p : pairs)
    if (p.i == i && p.j == j) return &p;
  return nullptr;
}

ConstraintSet cell_of(const Game& g, int action) {
  if (action < 0 || action >= g.n_actions()) throw std::out_of_range("cell_of: action");
  ConstraintSet cs = ConstraintSet::simplex(g.n_outcomes());
  for (int j = 0; j < g.n_actions(); ++j) {
    if (j == action) continue;
    cs.add_le(loss_gap(g, action, j), 0.0);
  }
  return cs;
}

GameStructure analyze_game(const Game& g) {
  const int n = g.n_actions();
  const int m = g.n_outcomes();
  GameStructure s;
  s.game = g;
  s.normalization_flag = loss_normalization_violated(g);

  s.cell.reserve(n);
  for (int i = 0; i < n; ++i) s.cell.push_back(cell_of(g, i));

  std::vector<bool> nonempty(n);
  for (int i = 0; i < n; ++i) nonempty[i] = lp_feasible(s.cell[i]);

  // Dominated: empty cell. Degenerate: cell strictly inside another action's
  // cell. Mutual inclusion (duplicate actions) is not strict, so exact
  // duplicates both stay Pareto.
  s.kind.assign(n, ActionKind::kPareto);
  for (int i = 0; i < n; ++i) {
    if (!nonempty[i]) {
      s.kind[i] = ActionKind::kDominated;
      continue;
    }
    for (int k = 0; k < n && s.kind[i] == ActionKind::kPareto; ++k) {
      if (k == i || !nonempty[k]) continue;
      if (cell_subset(s.cell[i], s.cell[k]) && !cell_subset(s.cell[k], s.cell[i]))
        s.kind[i] = ActionKind::kDegenerate;
    }
  }
  for (int i = 0; i < n; ++i) {
    switch (s.kind[i]) {
      case ActionKind::kPareto: s.pareto.push_back(i); break;
      case ActionKind::kDominated: s.dominated.push_back(i); break;
      case ActionKind::kDegenerate: s.degenerate.push_back(i); break;
    }
  }

  // Neighbor pairs: Pareto cells meeting in an (M-2)-dimensional face.
  for (std::size_t pi = 0; pi < s.pareto.size(); ++pi) {
    for (std::size_t pj = pi + 1; pj < s.pareto.size(); ++pj) {
      int i = s.pareto[pi], j = s.pareto[pj];
      ConstraintSet both = s.cell[i];
      both.merge(s.cell[j]);
      if (affine_dimension(both) != m - 2) continue;

      NeighborPair pair;
      pair.i = i;
      pair.j = j;
      // N+: every action whose cell contains the shared face.
      for (int k = 0; k < n; ++k) {
        bool contains = true;
        for (const auto& row : s.cell[k].le) {
          if (lp_extremize(both, row.a, true).value > row.b + kIncludeTol) {
            contains = false;
            break;
          }
        }
        if (contains) pair.nplus.push_back(k);
      }

      Eigen::VectorXd gap = loss_gap(g, i, j);
      pair.locally_observable = in_direct_sum(gap, signal_blocks(g, pair.nplus));
      std::vector<int> all(n);
      for (int k = 0; k < n; ++k) all[k] = k;
      pair.globally_observable = pair.locally_observable || in_direct_sum(gap, signal_blocks(g, all));
      pair.observers = pair.locally_observable ? pair.nplus : all;

      pair.v.resize(n);
      for (int a = 0; a < n; ++a) pair.v[a] = Eigen::VectorXd::Zero(g.sigma[a]);
      if (pair.globally_observable) {
        if (!solve_observers(g, pair.observers, gap, pair.v))
          throw std::logic_error("analyze_game: observable pair with no observer solution");
      }
      s.pairs.push_back(std::move(pair));
    }
  }

  s.W.assign(n, 0.0);
  for (const auto& pair : s.pairs)
    for (int a : pair.observers)
      s.W[a] = std::max(s.W[a], pair.v[a].size() ? pair.v[a].lpNorm<Eigen::Infinity>() : 0.0);

  if (s.pareto.size() <= 1) {
    s.cls = GameClass::kTrivial;
  } else {
    bool all_local = true, all_global = true;
    for (const auto& pair : s.pairs) {
      all_local = all_local && pair.locally_observable;
      all_global = all_global && pair.globally_observable;
    }
    s.cls = !all_global ? GameClass::kNotGloballyObservable
            : all_local ? GameClass::kLocallyObservable
                        : GameClass::kGloballyObservableOnly;
  }
  return s;
}

Eigen::VectorXd observer_vector(const GameStructure& s, int i, int j, int a) {
  const NeighborPair* p = s.find_pair(i, j);
  if (!p) throw std::invalid_argument("observer_vector: not a neighbor pair");
  Eigen::VectorXd v = p->v.at(a);
  return (i < j) ? v : Eigen::VectorXd(-v);
}

nlohmann::json structure_report(const GameStructure& s) {
  nlohmann::json rep;
  rep["game"] = s.game.name;
  rep["actions"] = s.game.n_actions();
  rep["outcomes"] = s.game.n_outcomes();
  rep["symbols_per_action"] = s.game.sigma;
  rep["observability_class"] = to_string(s.cls);
  switch (s.cls) {
    case GameClass::kTrivial: rep["difficulty"] = "trivial"; break;
    case GameClass::kLocallyObservable: rep["difficulty"] = "easy"; break;
    case GameClass::kGloballyObservableOnly: rep["difficulty"] = "hard"; break;
    case GameClass::kNotGloballyObservable: rep["difficulty"] = "intractable"; break;
  }
  rep["loss_normalization_violated"] = s.normalization_flag;

  auto one_based = [](const std::vector<int>& xs) {
    std::vector<int> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = xs[k] + 1;
    return out;
  };
  rep["pareto"] = one_based(s.pareto);
  rep["dominated"] = one_based(s.dominated);
  rep["degenerate"] = one_based(s.degenerate);
  rep["weights"] = s.W;

  nlohmann::json cells = nlohmann::json::array();
  for (int i = 0; i < s.game.n_actions(); ++i) {
    nlohmann::json c;
    c["action"] = i + 1;
    c["kind"] = to_string(s.kind[i]);
    c["dimension"] = affine_dimension(s.cell[i]);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : s.cell[i].le) {
      nlohmann::json r;
      r["coeffs"] = std::vector<double>(row.a.data(), row.a.data() + row.a.size());
      r["bound"] = row.b;
      rows.push_back(std::move(r));
    }
    c["constraints"] = std::move(rows);
    cells.push_back(std::move(c));
  }
  rep["cells"] = std::move(cells);

  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : s.pairs) {
    nlohmann::json jp;
    jp["pair"] = std::vector<int>{p.i + 1, p.j + 1};
    jp["nplus"] = one_based(p.nplus);
    jp["observers"] = one_based(p.observers);
    jp["locally_observable"] = p.locally_observable;
    jp["globally_observable"] = p.globally_observable;
    nlohmann::json vecs;
    for (int a : p.observers) {
      const auto& v = p.v[a];
      vecs[std::to_string(a + 1)] = std::vector<double>(v.data(), v.data() + v.size());
    }
    jp["vectors"] = std::move(vecs);
    pairs.push_back(std::move(jp));
  }
  rep["neighbor_pairs"] = std::move(pairs);
  return rep;
}

}  // namespace pm
