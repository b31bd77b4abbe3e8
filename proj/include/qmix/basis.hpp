#ifndef QMIX_BASIS_HPP_
#define QMIX_BASIS_HPP_

#include <vector>

#include <Eigen/Dense>

namespace qmix {

/// Orthonormal Hermitian operator basis for d x d matrices.
///
/// Element 0 is I/sqrt(d); the remaining d^2-1 elements are the generalized
/// Gell-Mann matrices in a fixed order: symmetric off-diagonal pairs
/// (E_jk + E_kj)/sqrt(2) for j < k in row-major order, then the antisymmetric
/// pairs -i(E_jk - E_kj)/sqrt(2) in the same order, then the d-1 traceless
/// diagonal matrices in increasing rank order. All elements have unit
/// Hilbert-Schmidt norm and are pairwise orthogonal under Tr(A*B).
class HermitianBasis {
 public:
  static HermitianBasis build(int dim);

  int dim() const { return dim_; }
  const std::vector<Eigen::MatrixXcd>& elements() const { return elements_; }
  const Eigen::MatrixXcd& element(int i) const { return elements_.at(i); }

 private:
  HermitianBasis(int dim, std::vector<Eigen::MatrixXcd> elements)
      : dim_(dim), elements_(std::move(elements)) {}

  int dim_;
  std::vector<Eigen::MatrixXcd> elements_;
};

/// Coefficients r_i = Tr(M * X_i) of a Hermitian matrix in the basis.
/// M is symmetrized first; deviations from Hermiticity beyond 1e-10 throw.
Eigen::VectorXd vectorize(const Eigen::MatrixXcd& M, const HermitianBasis& basis);

/// Reconstructs sum_i r[i] * X_i. Hermitian by construction.
Eigen::MatrixXcd devectorize(const Eigen::VectorXd& r, const HermitianBasis& basis);

}  // namespace qmix

#endif  // QMIX_BASIS_HPP_
