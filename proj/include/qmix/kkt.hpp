#ifndef QMIX_KKT_HPP_
#define QMIX_KKT_HPP_

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qmix/state.hpp"

namespace qmix {

/// Feasibility tolerance on pseudo-probabilities.
inline constexpr double kFeasibilityEps = 1e-10;

/// Relative singular-value threshold used for the rank gate.
inline constexpr double kRankThreshold = 1e-10;

/// Stationarity system restricted to a support, in the reference-row form:
/// A(i,j) = (r_i - r_K)^T r_j + delta_iK, B(i) = (r_i - r_K)^T r_o + delta_iK,
/// indices relative to the support with the last support element as reference.
struct SupportSystem {
  std::vector<int> support;
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  int rank = 0;
  Eigen::MatrixXd gram;  // R_K^T R_K for the support columns
};

/// Solution of the equality-constrained system before the sign test.
struct PseudoProbability {
  Eigen::VectorXd values;
  bool feasible = false;
  bool rank_deficient = false;
  /// Distance at the (clamped, renormalized) weights; NaN unless feasible.
  double distance = std::numeric_limits<double>::quiet_NaN();
};

SupportSystem build_system(const CoeffVector& r_o, const StateSet& set,
                           const std::vector<int>& support);

/// Solves A p = B when the rank gate passes; rank-deficient systems are only
/// flagged. Feasible solutions have negatives in [-eps, 0) clamped to zero,
/// weights renormalized, and the distance filled in.
PseudoProbability solve_support(const SupportSystem& sys, const CoeffVector& r_o,
                                const StateSet& set);

/// Closed two-state formula p1 = (r_o - r_2)^T (r_1 - r_2) / ||r_1 - r_2||^2.
PseudoProbability closed_k2(const CoeffVector& r_o, const CoeffVector& r_1,
                            const CoeffVector& r_2);

/// Closed three-state formula with denominator
/// ||r_1 - r_2||^2 ||r_3 - r_2||^2 - [(r_1 - r_2)^T (r_3 - r_2)]^2.
PseudoProbability closed_k3(const CoeffVector& r_o, const CoeffVector& r_1,
                            const CoeffVector& r_2, const CoeffVector& r_3);

}  // namespace qmix

#endif  // QMIX_KKT_HPP_
