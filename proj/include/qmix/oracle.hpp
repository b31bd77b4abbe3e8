#ifndef QMIX_ORACLE_HPP_
#define QMIX_ORACLE_HPP_

#include <Eigen/Dense>

#include "qmix/state.hpp"

namespace qmix {

enum class OracleMethod { projected_gradient, grid };

struct OracleResult {
  double distance = 0.0;
  Eigen::VectorXd weights;
  int iterations = 0;
  bool converged = false;
  OracleMethod method = OracleMethod::projected_gradient;
};

/// Euclidean projection onto the probability simplex (sort-based, exact).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Independent numerical solver for min 0.5 ||r_o - R p||^2 over the simplex:
/// fixed-step gradient descent (step 1/L) with exact simplex projection.
OracleResult projected_gradient(const CoeffVector& r_o, const StateSet& set,
                                double tol = 1e-12, int max_iter = 200000);

/// Exhaustive evaluation of all weight vectors with components j/resolution.
/// Refused for N > 4 or resolution > 400.
OracleResult grid_bruteforce(const CoeffVector& r_o, const StateSet& set,
                             int resolution);

}  // namespace qmix

#endif  // QMIX_ORACLE_HPP_
