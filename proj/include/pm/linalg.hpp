// Dense linear-algebra helpers shared across the toolkit. Thin wrappers over
// Eigen so the rest of the code states intent (min-norm solve, span test,
// rank-one inverse update) rather than decompositions.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace pm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Minimum-2-norm solution of A x = b. Throws std::domain_error if the system
// is inconsistent (residual above `tol` in the infinity norm).
inline Vec least_norm_solve(const Mat& A, const Vec& b, double tol = 1e-9) {
  if (A.rows() != b.size()) throw std::invalid_argument("least_norm_solve: shape mismatch");
  if (A.cols() == 0) {
    if (b.size() > 0 && b.lpNorm<Eigen::Infinity>() > tol)
      throw std::domain_error("least_norm_solve: inconsistent system");
    return Vec::Zero(0);
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  Vec x = cod.solve(b);
  if ((A * x - b).lpNorm<Eigen::Infinity>() > tol)
    throw std::domain_error("least_norm_solve: inconsistent system");
  return x;
}

// Numerical rank with an absolute singular-value cutoff (scaled by the largest
// singular value when that exceeds 1).
inline int numerical_rank(const Mat& A, double tol = 1e-9) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& sv = svd.singularValues();
  double cut = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

// Whether `target` lies in the column span of the horizontally stacked blocks.
inline bool in_direct_sum(const Vec& target, const std::vector<Mat>& blocks, double tol = 1e-9) {
  long cols = 0;
  for (const auto& blk : blocks) {
    if (blk.rows() != target.size()) throw std::invalid_argument("in_direct_sum: row mismatch");
    cols += blk.cols();
  }
  Mat G(target.size(), cols);
  long at = 0;
  for (const auto& blk : blocks) {
    G.middleCols(at, blk.cols()) = blk;
    at += blk.cols();
  }
  Mat Gb(target.size(), cols + 1);
  Gb << G, target;
  return numerical_rank(G, tol) == numerical_rank(Gb, tol);
}

// Sherman-Morrison: given G_inv = G^{-1}, return (G + x x^T)^{-1}.
// Throws std::domain_error when the update is numerically singular.
inline Mat rank1_inverse_update(const Mat& G_inv, const Vec& x) {
  Vec Gx = G_inv * x;
  double denom = 1.0 + x.dot(Gx);
  if (denom <= 1e-12) throw std::domain_error("rank1_inverse_update: non-positive denominator");
  return G_inv - (Gx * Gx.transpose()) / denom;
}

}  // namespace pm
