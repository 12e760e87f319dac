#pragma once

#include <functional>

#include "holoqed/types.hpp"

namespace holoqed::linalg {

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant (orders 3..13). Diagonal inputs are exponentiated entrywise.
Matrix expm(const Matrix& a);

/// Fréchet derivative of expm at `a` in direction `e`, read off the upper-right
/// block of exp([[a, e], [0, a]]).
Matrix expm_frechet_block(const Matrix& a, const Matrix& e);

/// exp(-i H dt) for Hermitian H through its eigendecomposition, together with
/// the divided-difference kernel needed for exact directional derivatives.
class HermitianExp {
 public:
  HermitianExp() = default;
  HermitianExp(const Matrix& h, double dt);

  const Matrix& unitary() const { return unitary_; }
  const Matrix& eigenvectors() const { return vecs_; }
  const RealVector& eigenvalues() const { return vals_; }

  /// Divided differences of f(x) = exp(-i x dt) on the spectrum:
  /// kernel(k,l) = (f(l_k) - f(l_l)) / (l_k - l_l), or f'(l_k) on the diagonal.
  const Matrix& kernel() const { return kernel_; }

  /// d/ds exp(-i (H + s E) dt) at s = 0.
  Matrix derivative(const Matrix& direction) const;

 private:
  RealVector vals_;
  Matrix vecs_;
  Matrix unitary_;
  Matrix kernel_;
};

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Closest isometry (polar factor) to a tall matrix.
Matrix polar_isometry(const Matrix& m);

/// Random Haar unitary by QR of a complex Ginibre matrix with phase fixing.
template <class Rng>
Matrix haar_unitary(int n, Rng& rng);

struct LanczosResult {
  double value = 0.0;
  RealVector vector;
  int matvecs = 0;
  double residual = 0.0;
};

/// Lowest eigenpair of a real symmetric operator: Lanczos with full
/// reorthogonalisation, restarted from the current Ritz vector.
LanczosResult lanczos_lowest(const std::function<void(const RealVector&, RealVector&)>& apply,
                             const RealVector& guess, double tol, int krylov_dim = 40,
                             int max_restarts = 500);

}  // namespace holoqed::linalg

#include <random>

namespace holoqed::linalg {

template <class Rng>
Matrix haar_unitary(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const cplx phase = mag > 0 ? r(j, j) / mag : cplx(1.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace holoqed::linalg
