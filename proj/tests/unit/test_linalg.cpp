#include "doctest.h"
#include "holoqed/linalg.hpp"
#include "unit/helpers.hpp"

using namespace holoqed;

TEST_CASE("expm matches the spectral oracle on random Hermitian generators") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 15;
    const double scale = trial % 2 ? 0.05 : 3.0;  // exercises low-order Pade and squaring
    const Matrix h = testing::random_hermitian(n, rng, scale);
    const Matrix u = linalg::expm(-kI * 1.7 * h);
    CHECK(max_abs(u - testing::spectral_exp(h, 1.7)) < 1e-12);
    CHECK(unitarity_residual(u) < 1e-12);
  }
}

TEST_CASE("expm of a diagonal matrix is entrywise") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = cplx(0.0, 1.0);
  d(1, 1) = cplx(-2.0, 0.5);
  d(2, 2) = 3.0;
  const Matrix e = linalg::expm(d);
  CHECK(std::abs(e(1, 1) - std::exp(cplx(-2.0, 0.5))) < 1e-15);
  CHECK(e(0, 1) == cplx(0.0));
}

TEST_CASE("expm of a nilpotent matrix terminates the series") {
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  Matrix expect = Matrix::Identity(3, 3) + n + 0.5 * n * n;
  CHECK(max_abs(linalg::expm(n) - expect) < 1e-13);
}

TEST_CASE("spectral step derivative agrees with the block-exponential derivative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial;
    const Matrix h = testing::random_hermitian(n, rng, 0.3);
    const Matrix e = testing::random_hermitian(n, rng, 1.0);
    const linalg::HermitianExp he(h, 10.0);
    const Matrix block = linalg::expm_frechet_block(-kI * 10.0 * h, -kI * 10.0 * e);
    CHECK(max_abs(he.derivative(e) - block) < 1e-11);
    // Degenerate spectrum path.
    const linalg::HermitianExp deg(Matrix::Identity(n, n), 10.0);
    const Matrix d = linalg::expm_frechet_block(-kI * 10.0 * Matrix::Identity(n, n), -kI * 10.0 * e);
    CHECK(max_abs(deg.derivative(e) - d) < 1e-11);
  }
}

TEST_CASE("Lanczos finds the lowest eigenvalue of a dense symmetric matrix") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const int n = 300;
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  const auto res = linalg::lanczos_lowest([&](const RealVector& x, RealVector& y) { y = m * x; },
                                          RealVector::Ones(n), 1e-10, 40, 2000);
  CHECK(res.value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-11));
  CHECK(res.residual < 1e-10);
}

TEST_CASE("polar factor is an isometry closest to its input") {
  std::mt19937_64 rng(5);
  const Matrix u = linalg::haar_unitary(6, rng);
  CHECK(unitarity_residual(u) < 1e-13);
  const Matrix tall = u.leftCols(3);
  CHECK(max_abs(linalg::polar_isometry(tall) - tall) < 1e-13);
  const Matrix p = linalg::polar_isometry(tall + 0.01 * Matrix::Ones(6, 3));
  CHECK(max_abs(p.adjoint() * p - Matrix::Identity(3, 3)) < 1e-13);
}
