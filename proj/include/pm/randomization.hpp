// Randomized confidence-bound scale: instead of the deterministic bound B,
// draw Z from a discretized half-Gaussian on K equally spaced points of
// [A, B]. The top bin rho_K = B keeps only a small tail probability eps, so
// the bound is almost always tighter than B; the first K-1 bins share the
// remaining 1-eps proportionally to exp(-rho_k^2 / 2 sigma^2).
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pm/rng.hpp"

namespace pm {

struct RandomizationConfig {
  int K = 5;
  double eps = 1e-7;
  double sigma = 1.0;
  double A = 0.0;
};

inline void check_randomization(const RandomizationConfig& cfg) {
  if (cfg.K < 1) throw std::invalid_argument("randomization: K must be >= 1");
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("randomization: sigma must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw std::invalid_argument("randomization: eps must lie in (0,1)");
}

// The K support points A = rho_1 <= ... <= rho_K = B.
inline std::vector<double> bin_values(const RandomizationConfig& cfg, double B) {
  check_randomization(cfg);
  if (cfg.K == 1) return {B};
  std::vector<double> rho(cfg.K);
  for (int k = 0; k < cfg.K; ++k)
    rho[k] = cfg.A + (B - cfg.A) * static_cast<double>(k) / (cfg.K - 1);
  return rho;
}

// Closed-form bin probabilities; the last bin carries exactly eps.
inline std::vector<double> bin_probabilities(const RandomizationConfig& cfg, double B) {
  check_randomization(cfg);
  if (cfg.K == 1) return {1.0};
  std::vector<double> rho = bin_values(cfg, B);
  std::vector<double> p(cfg.K, 0.0);
  double norm = 0.0;
  for (int k = 0; k < cfg.K - 1; ++k) {
    p[k] = std::exp(-rho[k] * rho[k] / (2.0 * cfg.sigma * cfg.sigma));
    norm += p[k];
  }
  double acc = 0.0;
  for (int k = 0; k < cfg.K - 1; ++k) {
    p[k] *= (1.0 - cfg.eps) / norm;
    acc += p[k];
  }
  p[cfg.K - 1] = 1.0 - acc;
  return p;
}

// One draw of Z. A degenerate range (B <= A) collapses to B, as does K = 1,
// which recovers the deterministic bound.
inline double sample_z(const RandomizationConfig& cfg, double B, Rng& rng) {
  check_randomization(cfg);
  if (cfg.K == 1 || B <= cfg.A) return B;
  std::vector<double> rho = bin_values(cfg, B);
  std::vector<double> p = bin_probabilities(cfg, B);
  return rho[rng.categorical(p)];
}

}  // namespace pm
