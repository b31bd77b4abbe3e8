#include "qmix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmix {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    const double t = (1.0 - css) / (i + 1);
    if (u[i] + t > 0.0) {
      rho = i;
      theta = t;
    }
  }
  (void)rho;
  return (v.array() + theta).cwiseMax(0.0);
}

OracleResult projected_gradient(const CoeffVector& r_o, const StateSet& set,
                                double tol, int max_iter) {
  if (r_o.dim != set.dim) {
    throw std::invalid_argument("projected_gradient: dimension mismatch");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("projected_gradient: tol must be positive");
  }
  const int n = set.size();
  const Eigen::MatrixXd& R = set.vectors;
  const Eigen::MatrixXd gram = R.transpose() * R;
  const Eigen::VectorXd c = R.transpose() * r_o.coeffs;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lip = std::max(es.eigenvalues().maxCoeff(), 1e-12);

  OracleResult res;
  res.method = OracleMethod::projected_gradient;
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
  const auto objective = [&](const Eigen::VectorXd& w) {
    return 0.5 * (r_o.coeffs - R * w).squaredNorm();
  };
  double obj = objective(p);
  const double pg_tol = std::sqrt(tol);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd grad = gram * p - c;
    const Eigen::VectorXd next = project_to_simplex(p - grad / lip);
    const double next_obj = objective(next);
    const double pg_norm = (next - p).norm() * lip;
    const double decrease = obj - next_obj;
    p = next;
    obj = next_obj;
    res.iterations = it + 1;
    if (decrease < tol && pg_norm < pg_tol) {
      res.converged = true;
      break;
    }
  }
  res.weights = p;
  res.distance = obj;
  return res;
}

namespace {

void grid_recurse(const Eigen::MatrixXd& R, const Eigen::VectorXd& target,
                  int resolution, int index, int remaining,
                  Eigen::VectorXi& counts, double& best,
                  Eigen::VectorXi& best_counts) {
  const int n = static_cast<int>(counts.size());
  if (index == n - 1) {
    counts[index] = remaining;
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(R.rows());
    for (int i = 0; i < n; ++i) {
      mix += (double(counts[i]) / resolution) * R.col(i);
    }
    const double d = 0.5 * (target - mix).squaredNorm();
    if (d < best) {
      best = d;
      best_counts = counts;
    }
    return;
  }
  for (int j = 0; j <= remaining; ++j) {
    counts[index] = j;
    grid_recurse(R, target, resolution, index + 1, remaining - j, counts, best,
                 best_counts);
  }
}

}  // namespace

OracleResult grid_bruteforce(const CoeffVector& r_o, const StateSet& set,
                             int resolution) {
  const int n = set.size();
  if (n > 4 || resolution > 400) {
    throw std::invalid_argument("grid_bruteforce: instance too large");
  }
  if (resolution < 1) {
    throw std::invalid_argument("grid_bruteforce: resolution must be >= 1");
  }
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n);
  Eigen::VectorXi best_counts = counts;
  double best = std::numeric_limits<double>::infinity();
  grid_recurse(set.vectors, r_o.coeffs, resolution, 0, resolution, counts, best,
               best_counts);

  OracleResult res;
  res.method = OracleMethod::grid;
  res.converged = true;
  res.distance = best;
  res.weights = best_counts.cast<double>() / resolution;
  return res;
}

}  // namespace qmix
