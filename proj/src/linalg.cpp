#include "holoqed/linalg.hpp"

#include <array>
#include <cmath>

#include "holoqed/errors.hpp"

namespace holoqed::linalg {
namespace {

double norm1(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

bool is_diagonal(const Matrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j && a(i, j) != cplx(0.0)) return false;
  return true;
}

// Higham (2005) backward-error bounds for double precision.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

Matrix pade_low(const Matrix& a, int m) {
  static const std::array<std::array<double, 10>, 4> b = {{
      {120., 60., 12., 1.},
      {30240., 15120., 3360., 420., 30., 1.},
      {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.},
      {17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160., 110880., 3960.,
       90., 1.},
  }};
  const auto& c = b[(m - 3) / 2];
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix pw = id;
  Matrix u_inner = c[1] * id;
  Matrix v = c[0] * id;
  for (int k = 1; 2 * k <= m; ++k) {
    pw = pw * a2;
    v += c[2 * k] * pw;
    if (2 * k + 1 <= m) u_inner += c[2 * k + 1] * pw;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
  static const std::array<double, 14> b = {
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
      1323241920.,        40840800.,          960960.,           16380.,
      182.,               1.};
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix expm(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "expm needs a square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (is_diagonal(a)) {
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = std::exp(a(i, i));
    return out;
  }
  const double nrm = norm1(a);
  for (int k = 0; k < 4; ++k)
    if (nrm <= kTheta[k]) return pade_low(a, 3 + 2 * k);
  int s = 0;
  if (nrm > kTheta[4]) s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / kTheta[4]))));
  Matrix r = pade13(a / std::ldexp(1.0, s));
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

Matrix expm_frechet_block(const Matrix& a, const Matrix& e) {
  const Eigen::Index n = a.rows();
  Matrix big = Matrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = a;
  big.bottomRightCorner(n, n) = a;
  big.topRightCorner(n, n) = e;
  return expm(big).topRightCorner(n, n);
}

HermitianExp::HermitianExp(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  vals_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
  const Eigen::Index n = h.rows();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::exp(-kI * vals_(k) * dt);
  unitary_ = vecs_ * phases.asDiagonal() * vecs_.adjoint();
  kernel_.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      // (e^{-i a dt} - e^{-i b dt}) / (a - b) = -i dt e^{-i (a+b) dt / 2} sinc((a-b) dt / 2)
      const double half = 0.5 * (vals_(k) - vals_(l)) * dt;
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      kernel_(k, l) = -kI * dt * std::exp(-kI * 0.5 * (vals_(k) + vals_(l)) * dt) * sinc;
    }
  }
}

Matrix HermitianExp::derivative(const Matrix& direction) const {
  const Matrix rotated = vecs_.adjoint() * direction * vecs_;
  return vecs_ * kernel_.cwiseProduct(rotated) * vecs_.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix polar_isometry(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

LanczosResult lanczos_lowest(const std::function<void(const RealVector&, RealVector&)>& apply,
                             const RealVector& guess, double tol, int krylov_dim,
                             int max_restarts) {
  const Eigen::Index n = guess.size();
  require(n > 0, ErrorCode::InvalidArgument, "empty Lanczos problem");
  LanczosResult res;
  RealVector x = guess;
  if (x.norm() == 0.0) x.setOnes();
  x.normalize();
  const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
  RealMatrix basis(n, m);
  RealVector w(n);
  for (int restart = 0; restart < max_restarts; ++restart) {
    RealMatrix t = RealMatrix::Zero(m, m);
    basis.col(0) = x;
    int used = m;
    for (int j = 0; j < m; ++j) {
      apply(basis.col(j), w);
      ++res.matvecs;
      // Full reorthogonalisation, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        const RealVector c = basis.leftCols(j + 1).transpose() * w;
        w -= basis.leftCols(j + 1) * c;
        if (pass == 0) t(j, j) = c(j);
        else t(j, j) += c(j);
      }
      if (j + 1 == m) break;
      const double beta = w.norm();
      if (beta < 1e-14) {
        used = j + 1;
        break;
      }
      t(j, j + 1) = t(j + 1, j) = beta;
      basis.col(j + 1) = w / beta;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t.topLeftCorner(used, used));
    res.value = es.eigenvalues()(0);
    x = basis.leftCols(used) * es.eigenvectors().col(0);
    x.normalize();
    apply(x, w);
    ++res.matvecs;
    res.residual = (w - res.value * x).norm();
    if (res.residual < tol || used < m) break;
  }
  res.vector = x;
  return res;
}

}  // namespace holoqed::linalg
