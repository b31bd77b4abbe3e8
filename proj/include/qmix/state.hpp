#ifndef QMIX_STATE_HPP_
#define QMIX_STATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmix/basis.hpp"

namespace qmix {

/// Real coefficient vector of a unit-trace Hermitian operator in the
/// orthonormal basis; length d^2, first entry 1/sqrt(d) for unit trace.
struct CoeffVector {
  int dim = 0;
  Eigen::VectorXd coeffs;
};

/// Ordered set of coefficient vectors sharing one dimension,
/// stored column-wise (d^2 x N).
struct StateSet {
  int dim = 0;
  Eigen::MatrixXd vectors;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(vectors.cols()); }
  CoeffVector member(int i) const { return {dim, vectors.col(i)}; }
};

/// Pair of endpoint targets for the interpolated family
/// r_o(k) = k * a + (1-k) * b.
struct TargetFamily {
  CoeffVector a;  // k = 1 endpoint
  CoeffVector b;  // k = 0 endpoint
  std::string description;
};

struct ValidationReport {
  double trace = 0.0;
  double purity = 0.0;
  double min_eigenvalue = 0.0;
  bool strict_checked = false;
  bool trace_ok = false;
  bool purity_ok = false;
  bool psd_ok = true;

  bool valid() const { return trace_ok && purity_ok && psd_ok; }
};

/// Reports trace, purity and (in strict mode) the minimum eigenvalue of the
/// reconstructed matrix. Strict validation fails if min eigenvalue < -1e-8.
ValidationReport validate_state(const CoeffVector& r, const HermitianBasis& basis,
                                bool strict);

/// Ginibre-ensemble random density matrix G G^dag / Tr(G G^dag) in
/// coefficient form. Deterministic for a fixed seed.
CoeffVector random_density(int dim, std::uint64_t seed);

/// n Ginibre states drawn from a single seeded stream.
StateSet random_state_set(int dim, int n, std::uint64_t seed);

/// k * family.a + (1-k) * family.b; k must lie in [0, 1].
CoeffVector interpolate(const TargetFamily& family, double k);

/// Squared l2 (Hilbert-Schmidt) distance: 0.5 * ||a - b||_2^2.
double hs_distance(const CoeffVector& a, const CoeffVector& b);

}  // namespace qmix

#endif  // QMIX_STATE_HPP_
