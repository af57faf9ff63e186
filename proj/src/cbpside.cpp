#include "pm/cbpside.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pm/linalg.hpp"

namespace pm {

namespace {

void merge_sorted_unique(std::vector<int>& into, const std::vector<int>& add) {
  into.insert(into.end(), add.begin(), add.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

CbpSideState make_cbpside(const GameStructure& s, int d, CbpSideConfig cfg) {
  if (d < 1) throw std::invalid_argument("make_cbpside: context dimension must be positive");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("make_cbpside: lambda must be positive");
  if (!(cfg.alpha > 1.0)) throw std::invalid_argument("make_cbpside: alpha must exceed 1");
  if (cfg.randomized) check_randomization(cfg.rand);
  if (s.cls == GameClass::kNotGloballyObservable)
    throw std::invalid_argument("make_cbpside: game is not globally observable");
  CbpSideState st;
  st.structure = &s;
  st.cfg = cfg;
  st.d = d;
  st.counts.assign(s.game.n_actions(), 0);
  for (int a = 0; a < s.game.n_actions(); ++a) {
    st.B.push_back(Eigen::MatrixXd::Zero(s.game.sigma[a], d));
    st.Ginv.push_back(Eigen::MatrixXd::Identity(d, d) / cfg.lambda);
    st.G.push_back(Eigen::MatrixXd::Identity(d, d) * cfg.lambda);
  }
  return st;
}

Eigen::VectorXd predict_pi(const CbpSideState& st, int a, const Eigen::VectorXd& x) {
  return st.B.at(a) * (st.Ginv.at(a) * x);
}

double context_norm(const CbpSideState& st, int a, const Eigen::VectorXd& x) {
  double q = x.dot(st.Ginv.at(a) * x);
  return std::sqrt(std::max(q, 0.0));
}

double contextual_width(const CbpSideState& st, int a, const Eigen::VectorXd& x, double z) {
  double sig = static_cast<double>(st.structure->game.sigma[a]);
  return sig * (z + sig) * context_norm(st, a, x);
}

double pseudo_count(const CbpSideState& st, int a, const Eigen::VectorXd& x) {
  double q = x.dot(st.Ginv.at(a) * x);
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / q;
}

double delta_hat_side(const CbpSideState& st, const NeighborPair& pair, const Eigen::VectorXd& x) {
  double d = 0.0;
  for (int a : pair.observers) {
    if (pair.v[a].size() == 0 || pair.v[a].isZero(0.0)) continue;
    d += pair.v[a].dot(predict_pi(st, a, x));
  }
  return d;
}

int cbpside_step(CbpSideState& st, const Eigen::VectorXd& x, Rng& rng) {
  const GameStructure& s = *st.structure;
  const int n = s.game.n_actions();
  if (x.size() != st.d) throw std::invalid_argument("cbpside_step: context dimension mismatch");
  st.t += 1;
  if (st.t <= n) return static_cast<int>(st.t - 1);

  const double B = std::sqrt(std::max((st.d + 4.0) * std::log(static_cast<double>(st.t)), 0.0));
  // One scale draw per action, in index order, so the stream is reproducible.
  std::vector<double> width(n);
  for (int a = 0; a < n; ++a) {
    double z = st.cfg.randomized ? sample_z(st.cfg.rand, B, rng) : B;
    width[a] = contextual_width(st, a, x, z);
  }

  std::vector<SignedPair> confident;
  for (int k = 0; k < static_cast<int>(s.pairs.size()); ++k) {
    const NeighborPair& pair = s.pairs[k];
    double c = 0.0;
    for (int a : pair.observers) {
      double norm = pair.v[a].size() ? pair.v[a].norm() : 0.0;
      if (norm > 0.0) c += norm * width[a];
    }
    double dh = delta_hat_side(st, pair, x);
    if (std::abs(dh) > c) confident.push_back({k, dh > 0.0 ? 1 : -1});
  }

  PlausibleSets ps = solve_plausible(s, confident, st.plausible_memo);
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
    if (pseudo_count(st, a, x) < eta * budget) underexplored.push_back(a);
  }
  merge_sorted_unique(candidates, underexplored);

  int best = candidates.front();
  double best_score = -1.0;
  for (int a : candidates) {
    double score = s.W[a] * width[a];
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

void cbpside_update(CbpSideState& st, const Eigen::VectorXd& x, int action, int symbol) {
  if (action < 0 || action >= static_cast<int>(st.counts.size()))
    throw std::out_of_range("cbpside_update: action");
  if (symbol < 0 || symbol >= st.B[action].rows()) throw std::out_of_range("cbpside_update: symbol");
  if (x.size() != st.d) throw std::invalid_argument("cbpside_update: context dimension mismatch");
  st.B[action].row(symbol) += x.transpose();
  st.G[action] += x * x.transpose();
  st.Ginv[action] = rank1_inverse_update(st.Ginv[action], x);
  st.counts[action] += 1;
}

double gram_drift(const CbpSideState& st, int a) {
  Eigen::MatrixXd resid = st.Ginv.at(a) * st.G.at(a) - Eigen::MatrixXd::Identity(st.d, st.d);
  return resid.cwiseAbs().maxCoeff();
}

}  // namespace pm
