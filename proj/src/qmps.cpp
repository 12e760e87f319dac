#include "holoqed/qmps.hpp"

#include <random>

#include "holoqed/errors.hpp"
#include "holoqed/linalg.hpp"

namespace holoqed {

double MpsTensor::isometry_residual() const {
  const Matrix s = a[0] * a[0].adjoint() + a[1] * a[1].adjoint();
  return max_abs(s - Matrix::Identity(s.rows(), s.cols()));
}

MpsTensor extract_tensor(const Matrix& u, int bond_dim) {
  require(u.rows() == u.cols() && u.rows() % 2 == 0, ErrorCode::DimensionMismatch,
          "joint unitary must be 2 cutoff square");
  const int cutoff = static_cast<int>(u.rows() / 2);
  require(bond_dim >= 1 && bond_dim <= cutoff, ErrorCode::InvalidArgument,
          "bond dimension must lie in [1, cutoff]");
  require(unitarity_residual(u) < 1e-8, ErrorCode::InvalidArgument, "joint operator is not unitary");
  MpsTensor t;
  double weight = 0.0;
  for (int s = 0; s < 2; ++s) {
    t.a[s] = u.block(s * cutoff, 0, bond_dim, bond_dim).transpose();
    weight += t.a[s].squaredNorm();
  }
  t.leakage = bond_dim < cutoff ? 1.0 - weight / bond_dim : 0.0;
  return t;
}

const Matrix& SiteChannel::with(char pauli) const {
  switch (pauli) {
    case 'i': return plain;
    case 'x': return inserted[0];
    case 'y': return inserted[1];
    case 'z': return inserted[2];
    default: fail(ErrorCode::InvalidArgument, std::string("unknown Pauli label ") + pauli);
  }
}

SiteChannel site_channel(const MpsTensor& t) {
  const int d = t.bond_dim();
  const std::array<Matrix, 2> k = {t.kraus(0), t.kraus(1)};
  std::array<std::array<Matrix, 2>, 2> kk;  // kk[s][s'] = K^s (x) conj(K^s')
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) kk[s][sp] = linalg::kron(k[s], k[sp].conjugate());
  SiteChannel ch;
  ch.dim = d;
  ch.plain = kk[0][0] + kk[1][1];
  ch.inserted[0] = kk[0][1] + kk[1][0];
  ch.inserted[1] = kI * kk[0][1] - kI * kk[1][0];
  ch.inserted[2] = kk[0][0] - kk[1][1];
  return ch;
}

Vector trace_functional(int dim) {
  Vector w = Vector::Zero(dim * dim);
  for (int i = 0; i < dim; ++i) w(i * dim + i) = 1.0;
  return w;
}

namespace {

Matrix unvec(const Vector& v, int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return m;
}

Vector vec(const Matrix& m) {
  const auto d = m.rows();
  Vector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m(i, j);
  return v;
}

}  // namespace

FixedPoint fixed_point(const SiteChannel& ch, const FixedPointOptions& opt) {
  const int d = ch.dim;
  Vector v = Vector::Zero(d * d);
  v(0) = 1.0;
  const int cap = opt.cap_factor * d * d;
  FixedPoint out;
  for (int it = 1; it <= cap; ++it) {
    Vector next = ch.plain * v;
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    out.iterations = it;
    if (change < opt.tol) {
      out.rho = unvec(v, d);
      return out;
    }
  }
  if (opt.direct_solve) {
    // A mixing channel has exactly one eigenvalue on the unit circle. Its
    // stationary state solves (I - T + r0 w^T) r = r0 with r0 the vacuum.
    const Eigen::ComplexEigenSolver<Matrix> es(ch.plain, false);
    const auto peripheral = (es.eigenvalues().array().abs() > 1.0 - opt.min_gap).count();
    if (peripheral == 1) {
      const Vector w = trace_functional(d);
      Vector r0 = Vector::Zero(d * d);
      r0(0) = 1.0;
      const Matrix m = Matrix::Identity(d * d, d * d) - ch.plain + r0 * w.transpose();
      const Vector r = m.fullPivLu().solve(r0);
      if ((ch.plain * r - r).cwiseAbs().maxCoeff() < opt.tol) {
        const Matrix rho = unvec(r, d);
        out.rho = 0.5 * (rho + rho.adjoint());
        return out;
      }
    }
  }
  fail(ErrorCode::NonConvergence, "transfer channel did not reach a fixed point");
}

Matrix transfer_channel_fixed_point(const MpsTensor& t) {
  require(t.isometry_residual() < 1e-6, ErrorCode::InvalidArgument, "tensor is not an isometry");
  return fixed_point(site_channel(t)).rho;
}

double one_site(const SiteChannel& ch, const Matrix& rho, char a) {
  return trace_functional(ch.dim).dot(ch.with(a) * vec(rho)).real();
}

double two_point(const SiteChannel& ch, const Matrix& rho, char a, char b, int r) {
  require(r >= 1, ErrorCode::InvalidArgument, "separation must be at least 1");
  Vector v = ch.with(a) * vec(rho);
  for (int k = 1; k < r; ++k) v = ch.plain * v;
  v = ch.with(b) * v;
  // Vector::dot conjugates its left argument; the trace functional is real.
  return trace_functional(ch.dim).dot(v).real();
}

double energy_density(const SiteChannel& ch, const Matrix& rho, const SpinChainModel& m) {
  const Vector w = trace_functional(ch.dim);
  const Vector v = vec(rho);
  const Vector zv = ch.with('z') * v;
  const Vector xv = ch.with('x') * v;
  const double zz = w.dot(ch.with('z') * zv).real();
  const double x = w.dot(xv).real();
  const double xx = w.dot(ch.with('x') * xv).real();
  const double z2 = w.dot(ch.with('z') * (ch.plain * zv)).real();
  return -(m.j_coupling * zz + m.h_field * x - m.v_perturbation * (xx + z2));
}

double energy_density(const MpsTensor& t, const SpinChainModel& model) {
  const SiteChannel ch = site_channel(t);
  return energy_density(ch, transfer_channel_fixed_point(t), model);
}

double correlation(const MpsTensor& t, char a, char b, int r) {
  const SiteChannel ch = site_channel(t);
  return two_point(ch, transfer_channel_fixed_point(t), a, b, r);
}

double buffer_population(const Matrix& rho, int from) {
  double p = 0.0;
  for (Eigen::Index n = from; n < rho.rows(); ++n) p += rho(n, n).real();
  return p;
}

std::vector<std::vector<std::uint8_t>> sample_chain(const Matrix& u, const std::vector<char>& bases,
                                                    int shots, std::uint64_t seed, int burn_in) {
  require(!bases.empty(), ErrorCode::InvalidArgument, "need at least one site");
  require(shots >= 0 && burn_in >= 0, ErrorCode::InvalidArgument, "negative shot or burn-in count");
  require(u.rows() == u.cols() && u.rows() % 2 == 0, ErrorCode::DimensionMismatch,
          "joint unitary must be 2 cutoff square");
  for (char b : bases)
    require(b == 'x' || b == 'y' || b == 'z', ErrorCode::InvalidArgument, "bases are x, y or z");
  const Eigen::Index cutoff = u.rows() / 2;
  const Matrix k0 = u.block(0, 0, cutoff, cutoff);
  const Matrix k1 = u.block(cutoff, 0, cutoff, cutoff);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t sites = bases.size();
  std::vector<std::vector<std::uint8_t>> out(static_cast<std::size_t>(shots),
                                             std::vector<std::uint8_t>(sites));
  for (auto& row : out) {
    Vector psi = Vector::Unit(cutoff, 0);
    for (std::size_t k = 0; k < sites + static_cast<std::size_t>(burn_in); ++k) {
      const bool recorded = k >= static_cast<std::size_t>(burn_in);
      const char basis = recorded ? bases[k - burn_in] : 'z';
      const Vector f0 = k0 * psi, f1 = k1 * psi;
      Vector plus, minus;
      switch (basis) {
        case 'z': plus = f0; minus = f1; break;
        case 'x': plus = inv_sqrt2 * (f0 + f1); minus = inv_sqrt2 * (f0 - f1); break;
        default: plus = inv_sqrt2 * (f0 - kI * f1); minus = inv_sqrt2 * (f0 + kI * f1); break;
      }
      const double p_plus = plus.squaredNorm();
      const double total = p_plus + minus.squaredNorm();
      const bool up = uni(rng) * total < p_plus;
      psi = up ? plus / std::sqrt(p_plus) : minus / minus.norm();
      if (recorded) row[k - burn_in] = up ? 0 : 1;
    }
  }
  return out;
}

}  // namespace holoqed
