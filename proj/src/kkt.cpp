#include "qmix/kkt.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmix {

namespace {

/// Clamps tiny negatives, renormalizes, and fills in the distance.
void finalize_feasible(PseudoProbability& pp, const Eigen::MatrixXd& columns,
                       const Eigen::VectorXd& target) {
  Eigen::VectorXd w = pp.values.cwiseMax(0.0);
  const double sum = w.sum();
  if (sum > 0.0) w /= sum;
  pp.values = w;
  pp.feasible = true;
  pp.distance = 0.5 * (target - columns * w).squaredNorm();
}

}  // namespace

SupportSystem build_system(const CoeffVector& r_o, const StateSet& set,
                           const std::vector<int>& support) {
  if (r_o.dim != set.dim) {
    throw std::invalid_argument("build_system: target and set dimensions differ");
  }
  if (support.empty()) {
    throw std::invalid_argument("build_system: empty support");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= set.size()) {
      throw std::out_of_range("build_system: support index out of range");
    }
    if (i > 0 && support[i] <= support[i - 1]) {
      throw std::invalid_argument("build_system: support must be strictly increasing");
    }
  }

  const int K = static_cast<int>(support.size());
  SupportSystem sys;
  sys.support = support;

  Eigen::MatrixXd cols(set.vectors.rows(), K);
  for (int i = 0; i < K; ++i) cols.col(i) = set.vectors.col(support[i]);

  sys.gram = cols.transpose() * cols;
  sys.A.resize(K, K);
  sys.B.resize(K);
  const Eigen::VectorXd& ref = cols.col(K - 1);
  for (int i = 0; i < K; ++i) {
    const Eigen::VectorXd diff = cols.col(i) - ref;
    for (int j = 0; j < K; ++j) sys.A(i, j) = diff.dot(cols.col(j));
    sys.B[i] = diff.dot(r_o.coeffs);
  }
  sys.A.row(K - 1).array() += 1.0;
  sys.B[K - 1] += 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.A);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankThreshold * sv[0];
  sys.rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++sys.rank;
  }
  return sys;
}

PseudoProbability solve_support(const SupportSystem& sys, const CoeffVector& r_o,
                                const StateSet& set) {
  const int K = static_cast<int>(sys.support.size());
  PseudoProbability pp;
  if (sys.rank < K) {
    pp.rank_deficient = true;
    return pp;
  }
  pp.values = sys.A.partialPivLu().solve(sys.B);
  if (pp.values.minCoeff() >= -kFeasibilityEps) {
    Eigen::MatrixXd cols(set.vectors.rows(), K);
    for (int i = 0; i < K; ++i) cols.col(i) = set.vectors.col(sys.support[i]);
    finalize_feasible(pp, cols, r_o.coeffs);
  }
  return pp;
}

PseudoProbability closed_k2(const CoeffVector& r_o, const CoeffVector& r_1,
                            const CoeffVector& r_2) {
  const Eigen::VectorXd diff = r_1.coeffs - r_2.coeffs;
  const double denom = diff.squaredNorm();
  if (denom <= 1e-14) {
    throw std::invalid_argument("closed_k2: coincident states");
  }
  PseudoProbability pp;
  pp.values.resize(2);
  pp.values[0] = (r_o.coeffs - r_2.coeffs).dot(diff) / denom;
  pp.values[1] = 1.0 - pp.values[0];
  if (pp.values.minCoeff() >= -kFeasibilityEps) {
    Eigen::MatrixXd cols(r_1.coeffs.size(), 2);
    cols.col(0) = r_1.coeffs;
    cols.col(1) = r_2.coeffs;
    finalize_feasible(pp, cols, r_o.coeffs);
  }
  return pp;
}

PseudoProbability closed_k3(const CoeffVector& r_o, const CoeffVector& r_1,
                            const CoeffVector& r_2, const CoeffVector& r_3) {
  const Eigen::VectorXd d12 = r_1.coeffs - r_2.coeffs;
  const Eigen::VectorXd d32 = r_3.coeffs - r_2.coeffs;
  const double denom = d12.squaredNorm() * d32.squaredNorm() -
                       d12.dot(d32) * d12.dot(d32);
  if (denom <= 1e-14) {
    throw std::invalid_argument("closed_k3: collinear triple");
  }

  const Eigen::VectorXd t2 = r_o.coeffs - r_2.coeffs;
  const Eigen::VectorXd d23 = r_2.coeffs - r_3.coeffs;
  const Eigen::VectorXd d13 = r_1.coeffs - r_3.coeffs;
  const Eigen::VectorXd t1 = r_o.coeffs - r_1.coeffs;

  PseudoProbability pp;
  pp.values.resize(3);
  pp.values[0] = (d12.dot(t2) * d23.dot(d23) - d12.dot(d23) * t2.dot(d23)) / denom;
  pp.values[1] = (d12.dot(d13) * t1.dot(d13) - d12.dot(t1) * d13.dot(d13)) / denom;
  pp.values[2] = 1.0 - pp.values[0] - pp.values[1];
  if (pp.values.minCoeff() >= -kFeasibilityEps) {
    Eigen::MatrixXd cols(r_1.coeffs.size(), 3);
    cols.col(0) = r_1.coeffs;
    cols.col(1) = r_2.coeffs;
    cols.col(2) = r_3.coeffs;
    finalize_feasible(pp, cols, r_o.coeffs);
  }
  return pp;
}

}  // namespace qmix
