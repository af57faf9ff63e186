#include "pm/cbp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pm {

namespace {

std::string pattern_key(const std::vector<SignedPair>& signed_pairs) {
  std::string key;
  for (const auto& sp : signed_pairs) {
    key += std::to_string(sp.pair_index);
    key += sp.sign > 0 ? '+' : '-';
  }
  return key;
}

void merge_sorted_unique(std::vector<int>& into, const std::vector<int>& add) {
  into.insert(into.end(), add.begin(), add.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

CbpState make_cbp(const GameStructure& s, CbpConfig cfg) {
  if (cfg.randomized) check_randomization(cfg.rand);
  if (!(cfg.alpha > 1.0)) throw std::invalid_argument("make_cbp: alpha must exceed 1");
  if (s.cls == GameClass::kNotGloballyObservable)
    throw std::invalid_argument("make_cbp: game is not globally observable");
  CbpState st;
  st.structure = &s;
  st.cfg = cfg;
  st.counts.assign(s.game.n_actions(), 0);
  st.tallies.clear();
  for (int a = 0; a < s.game.n_actions(); ++a)
    st.tallies.push_back(Eigen::VectorXd::Zero(s.game.sigma[a]));
  return st;
}

double explore_budget(double alpha, long t) {
  return std::cbrt(alpha) * std::pow(static_cast<double>(t), 2.0 / 3.0) *
         std::cbrt(std::log(static_cast<double>(t)));
}

double delta_hat(const CbpState& st, const NeighborPair& pair) {
  double d = 0.0;
  for (int a : pair.observers) {
    if (pair.v[a].size() == 0 || pair.v[a].isZero(0.0)) continue;
    if (st.counts[a] == 0) throw std::logic_error("delta_hat: observer has no samples yet");
    d += pair.v[a].dot(st.tallies[a]) / static_cast<double>(st.counts[a]);
  }
  return d;
}

double confidence_width(const CbpState& st, const NeighborPair& pair, double z) {
  double c = 0.0;
  for (int a : pair.observers) {
    double norm = pair.v[a].size() ? pair.v[a].lpNorm<Eigen::Infinity>() : 0.0;
    if (norm == 0.0) continue;
    if (st.counts[a] == 0) return std::numeric_limits<double>::infinity();
    c += norm * z / std::sqrt(static_cast<double>(st.counts[a]));
  }
  return c;
}

ConstraintSet build_halfspaces(const GameStructure& s, const std::vector<SignedPair>& signed_pairs) {
  ConstraintSet cs;
  cs.dim = s.game.n_outcomes();
  for (const auto& sp : signed_pairs) {
    const NeighborPair& pair = s.pairs.at(sp.pair_index);
    Eigen::VectorXd gap = (s.game.loss.row(pair.i) - s.game.loss.row(pair.j)).transpose();
    // Keep the region where sign * (L_i - L_j).p > 0, i.e. where the signed
    // estimate's orientation is the truth.
    cs.add_le(-sp.sign * gap, 0.0, /*strict=*/true);
  }
  return cs;
}

PlausibleSets plausible_sets(CbpState& st, const std::vector<SignedPair>& signed_pairs) {
  return solve_plausible(*st.structure, signed_pairs, st.plausible_memo);
}

PlausibleSets solve_plausible(const GameStructure& s, const std::vector<SignedPair>& signed_pairs,
                              std::unordered_map<std::string, PlausibleSets>& memo) {
  std::string key = pattern_key(signed_pairs);
  auto hit = memo.find(key);
  if (hit != memo.end()) return hit->second;

  ConstraintSet drows = build_halfspaces(s, signed_pairs);
  PlausibleSets out;
  for (int i : s.pareto) {
    ConstraintSet cs = s.cell[i];
    cs.merge(drows);
    if (lp_feasible(cs)) out.plausible.push_back(i);
  }
  if (out.plausible.empty()) {
    // Every orientation pattern that still admits outcomes keeps at least one
    // Pareto cell; an empty set means the confidence constraints contradict
    // each other. Reset to the uneliminated sets for this round.
    out.fallback = true;
    out.plausible = s.pareto;
    for (int k = 0; k < static_cast<int>(s.pairs.size()); ++k) out.pair_indices.push_back(k);
  } else {
    for (int k = 0; k < static_cast<int>(s.pairs.size()); ++k) {
      const NeighborPair& pair = s.pairs[k];
      ConstraintSet cs = s.cell[pair.i];
      cs.merge(s.cell[pair.j]);
      cs.merge(drows);
      if (lp_feasible(cs)) out.pair_indices.push_back(k);
    }
    if (out.plausible.size() == 1 && !out.pair_indices.empty())
      throw std::logic_error("plausible_sets: single plausible action with surviving pairs");
  }
  memo.emplace(std::move(key), out);
  return out;
}

int cbp_step(CbpState& st, Rng& rng) {
  const GameStructure& s = *st.structure;
  const int n = s.game.n_actions();
  st.t += 1;
  if (st.t <= n) return static_cast<int>(st.t - 1);  // initialization sweep

  const double B = std::sqrt(st.cfg.alpha * std::log(static_cast<double>(st.t)));
  std::vector<SignedPair> confident;
  for (int k = 0; k < static_cast<int>(s.pairs.size()); ++k) {
    const NeighborPair& pair = s.pairs[k];
    double z = st.cfg.randomized ? sample_z(st.cfg.rand, B, rng) : B;
    double dh = delta_hat(st, pair);
    if (std::abs(dh) > confidence_width(st, pair, z))
      confident.push_back({k, dh > 0.0 ? 1 : -1});
  }

  PlausibleSets ps = plausible_sets(st, confident);
  if (ps.fallback) st.confidence_failures += 1;

  std::vector<int> candidates = ps.plausible;
  std::vector<int> observers_in_play;
  for (int k : ps.pair_indices) {
    merge_sorted_unique(candidates, s.pairs[k].nplus);
    merge_sorted_unique(observers_in_play, s.pairs[k].observers);
  }
  const double budget = explore_budget(st.cfg.alpha, st.t);
  std::vector<int> underexplored;
  for (int a : observers_in_play) {
    double eta = std::pow(s.W[a], 2.0 / 3.0);
    if (static_cast<double>(st.counts[a]) <= eta * budget) underexplored.push_back(a);
  }
  merge_sorted_unique(candidates, underexplored);

  int best = candidates.front();
  double best_score = -1.0;
  for (int a : candidates) {
    double score = s.W[a] * s.W[a] / static_cast<double>(st.counts[a]);
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

void cbp_update(CbpState& st, int action, int symbol) {
  if (action < 0 || action >= static_cast<int>(st.counts.size()))
    throw std::out_of_range("cbp_update: action");
  if (symbol < 0 || symbol >= st.tallies[action].size())
    throw std::out_of_range("cbp_update: symbol");
  st.counts[action] += 1;
  st.tallies[action](symbol) += 1.0;
}

}  // namespace pm
