#include <complex>
#include <random>

#include <doctest.h>

#include "qmix/basis.hpp"

using qmix::HermitianBasis;

namespace {

Eigen::MatrixXcd random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = std::complex<double>(g(rng), g(rng));
  return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST_CASE("qubit basis is the normalized Pauli basis") {
  const HermitianBasis b = HermitianBasis::build(2);
  REQUIRE(b.elements().size() == 4);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  CHECK((b.element(0) - s * id2).norm() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  CHECK((b.element(1) - s * sx).norm() < 1e-14);
  CHECK((b.element(2) - s * sy).norm() < 1e-14);
  CHECK((b.element(3) - s * sz).norm() < 1e-14);
}

TEST_CASE("orthonormality and tracelessness") {
  for (int d = 2; d <= 5; ++d) {
    const HermitianBasis b = HermitianBasis::build(d);
    const int n = d * d;
    REQUIRE(static_cast<int>(b.elements().size()) == n);
    for (int i = 0; i < n; ++i) {
      CHECK((b.element(i) - b.element(i).adjoint()).norm() < 1e-14);
      if (i > 0) CHECK(std::abs(b.element(i).trace()) < 1e-14);
      for (int j = 0; j < n; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        const std::complex<double> inner = (b.element(i).adjoint() * b.element(j)).trace();
        CHECK(std::abs(inner - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("vectorize of known qubit states") {
  const HermitianBasis b = HermitianBasis::build(2);
  const double s = 1.0 / std::sqrt(2.0);

  Eigen::MatrixXcd mixed = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  Eigen::VectorXd r = qmix::vectorize(mixed, b);
  CHECK(r(0) == doctest::Approx(s).epsilon(1e-14));
  CHECK(r.tail(3).norm() < 1e-14);

  Eigen::MatrixXcd ket0 = Eigen::MatrixXcd::Zero(2, 2);
  ket0(0, 0) = 1.0;
  r = qmix::vectorize(ket0, b);
  CHECK(r(0) == doctest::Approx(s).epsilon(1e-14));
  CHECK(r(1) == doctest::Approx(0.0));
  CHECK(r(2) == doctest::Approx(0.0));
  CHECK(r(3) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("round trip and isometry over random Hermitian matrices") {
  std::mt19937_64 rng(20240817);
  for (int d : {2, 3, 4}) {
    const HermitianBasis b = HermitianBasis::build(d);
    for (int rep = 0; rep < 50; ++rep) {
      const Eigen::MatrixXcd M = random_hermitian(d, rng);
      const Eigen::VectorXd r = qmix::vectorize(M, b);
      const Eigen::MatrixXcd back = qmix::devectorize(r, b);
      CHECK((M - back).norm() < 1e-12);
      // Parseval: the coefficient map preserves the HS inner product.
      CHECK(r.squaredNorm() == doctest::Approx(M.squaredNorm()).epsilon(1e-12));
      const Eigen::MatrixXcd M2 = random_hermitian(d, rng);
      const Eigen::VectorXd r2 = qmix::vectorize(M2, b);
      const double hs = (M.adjoint() * M2).trace().real();
      CHECK(r.dot(r2) == doctest::Approx(hs).epsilon(1e-10));
    }
  }
}

TEST_CASE("unit trace pins the first coefficient") {
  std::mt19937_64 rng(7);
  for (int d : {2, 3, 4}) {
    const HermitianBasis b = HermitianBasis::build(d);
    Eigen::MatrixXcd M = random_hermitian(d, rng);
    M += ((1.0 - M.trace()) / double(d)) * Eigen::MatrixXcd::Identity(d, d);
    const Eigen::VectorXd r = qmix::vectorize(M, b);
    CHECK(r(0) == doctest::Approx(1.0 / std::sqrt(double(d))).epsilon(1e-13));
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(HermitianBasis::build(1), std::invalid_argument);
  CHECK_THROWS_AS(HermitianBasis::build(0), std::invalid_argument);

  const HermitianBasis b = HermitianBasis::build(2);
  Eigen::MatrixXcd nonherm(2, 2);
  nonherm << 0, 1, 0, 0;
  CHECK_THROWS_AS(qmix::vectorize(nonherm, b), std::invalid_argument);
  CHECK_THROWS_AS(qmix::vectorize(Eigen::MatrixXcd::Identity(3, 3), b),
                  std::invalid_argument);
  CHECK_THROWS_AS(qmix::devectorize(Eigen::VectorXd::Zero(3), b),
                  std::invalid_argument);
}
