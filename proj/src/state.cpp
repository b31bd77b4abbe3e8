#include "qmix/state.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qmix {

ValidationReport validate_state(const CoeffVector& r, const HermitianBasis& basis,
                                bool strict) {
  const int d = basis.dim();
  if (r.coeffs.size() != d * d) {
    throw std::invalid_argument("validate_state: coefficient length does not match basis");
  }
  ValidationReport rep;
  rep.trace = r.coeffs[0] * std::sqrt(double(d));
  rep.purity = r.coeffs.squaredNorm();
  rep.trace_ok = std::abs(r.coeffs[0] - 1.0 / std::sqrt(double(d))) <= 1e-9;
  rep.purity_ok = rep.purity <= 1.0 + 1e-9;
  if (strict) {
    rep.strict_checked = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(devectorize(r.coeffs, basis),
                                                       Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.psd_ok = rep.min_eigenvalue >= -1e-8;
  }
  return rep;
}

namespace {

Eigen::VectorXd ginibre_coeffs(std::mt19937_64& rng, const HermitianBasis& basis) {
  const int dim = basis.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = std::complex<double>(re, im);
    }
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return vectorize(rho, basis);
}

}  // namespace

CoeffVector random_density(int dim, std::uint64_t seed) {
  if (dim < 2) {
    throw std::invalid_argument("random_density: dimension must be >= 2");
  }
  std::mt19937_64 rng(seed);
  const HermitianBasis basis = HermitianBasis::build(dim);
  return {dim, ginibre_coeffs(rng, basis)};
}

StateSet random_state_set(int dim, int n, std::uint64_t seed) {
  if (dim < 2 || n < 1) {
    throw std::invalid_argument("random_state_set: need dim >= 2 and n >= 1");
  }
  std::mt19937_64 rng(seed);
  const HermitianBasis basis = HermitianBasis::build(dim);
  StateSet s;
  s.dim = dim;
  s.vectors.resize(dim * dim, n);
  for (int i = 0; i < n; ++i) s.vectors.col(i) = ginibre_coeffs(rng, basis);
  return s;
}

CoeffVector interpolate(const TargetFamily& family, double k) {
  if (family.a.dim != family.b.dim) {
    throw std::invalid_argument("interpolate: endpoint dimensions differ");
  }
  if (!(k >= 0.0 && k <= 1.0)) {
    throw std::domain_error("interpolate: k must lie in [0, 1]");
  }
  return {family.a.dim, k * family.a.coeffs + (1.0 - k) * family.b.coeffs};
}

double hs_distance(const CoeffVector& a, const CoeffVector& b) {
  if (a.dim != b.dim || a.coeffs.size() != b.coeffs.size()) {
    throw std::invalid_argument("hs_distance: dimension mismatch");
  }
  return 0.5 * (a.coeffs - b.coeffs).squaredNorm();
}

}  // namespace qmix
