#include "qmix/basis.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qmix {

namespace {
constexpr double kHermitianTol = 1e-10;
constexpr double kImagResidueTol = 1e-12;
}  // namespace

HermitianBasis HermitianBasis::build(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("HermitianBasis: dimension must be >= 2");
  }
  const int d = dim;
  std::vector<Eigen::MatrixXcd> els;
  els.reserve(d * d);

  els.push_back(Eigen::MatrixXcd::Identity(d, d) / std::sqrt(double(d)));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      els.push_back(m);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = std::complex<double>(0.0, -inv_sqrt2);
      m(k, j) = std::complex<double>(0.0, inv_sqrt2);
      els.push_back(m);
    }
  }
  for (int l = 1; l < d; ++l) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int mm = 0; mm < l; ++mm) m(mm, mm) = norm;
    m(l, l) = -double(l) * norm;
    els.push_back(m);
  }
  return HermitianBasis(d, std::move(els));
}

Eigen::VectorXd vectorize(const Eigen::MatrixXcd& M, const HermitianBasis& basis) {
  const int d = basis.dim();
  if (M.rows() != d || M.cols() != d) {
    throw std::invalid_argument("vectorize: matrix dimension does not match basis");
  }
  const double herm_dev = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermitianTol) {
    throw std::invalid_argument("vectorize: input matrix is not Hermitian");
  }
  const Eigen::MatrixXcd sym = 0.5 * (M + M.adjoint());

  Eigen::VectorXd r(d * d);
  for (int i = 0; i < d * d; ++i) {
    const std::complex<double> t = (sym * basis.element(i)).trace();
    if (std::abs(t.imag()) > kImagResidueTol) {
      throw std::invalid_argument("vectorize: nonreal coefficient residue");
    }
    r[i] = t.real();
  }
  return r;
}

Eigen::MatrixXcd devectorize(const Eigen::VectorXd& r, const HermitianBasis& basis) {
  const int d = basis.dim();
  if (r.size() != d * d) {
    throw std::invalid_argument("devectorize: coefficient length does not match basis");
  }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d * d; ++i) {
    M += r[i] * basis.element(i);
  }
  return M;
}

}  // namespace qmix
