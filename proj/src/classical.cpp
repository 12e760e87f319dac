#include "holoqed/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "holoqed/errors.hpp"
#include "holoqed/json_io.hpp"
#include "holoqed/linalg.hpp"

namespace holoqed {

// ---------------------------------------------------------------------------
// Exact diagonalisation

GroundState exact_ground_state(const SpinChainModel& model, int l, Boundary boundary) {
  require(l >= 1, ErrorCode::InvalidArgument, "chain needs at least one site");
  require(l <= 14, ErrorCode::SizeExceeded, "exact diagonalisation is limited to 14 sites");
  const bool periodic = boundary == Boundary::Periodic;
  require(!periodic || l >= 3, ErrorCode::InvalidArgument, "periodic chains need 3 or more sites");

  std::vector<std::pair<int, int>> nn, nnn;
  for (int i = 0; i + 1 < l; ++i) nn.emplace_back(i, i + 1);
  if (periodic) nn.emplace_back(l - 1, 0);
  for (int i = 1; i + 1 < l; ++i) nnn.emplace_back(i - 1, i + 1);
  if (periodic) {
    nnn.emplace_back(l - 2, 0);
    nnn.emplace_back(l - 1, 1);
  }

  const double jj = model.j_coupling, h = model.h_field, v = model.v_perturbation;
  const std::size_t n = std::size_t{1} << l;
  RealVector diag(static_cast<Eigen::Index>(n));
  auto z = [](std::size_t x, int i) { return (x >> i) & 1u ? -1.0 : 1.0; };
  for (std::size_t x = 0; x < n; ++x) {
    double e = 0.0;
    for (auto [a, b] : nn) e -= jj * z(x, a) * z(x, b);
    for (auto [a, b] : nnn) e += v * z(x, a) * z(x, b);
    diag(static_cast<Eigen::Index>(x)) = e;
  }
  auto apply = [&](const RealVector& in, RealVector& out) {
    out = diag.cwiseProduct(in);
    for (std::size_t x = 0; x < n; ++x) {
      const double c = in(static_cast<Eigen::Index>(x));
      for (int i = 0; i < l; ++i) out(static_cast<Eigen::Index>(x ^ (std::size_t{1} << i))) -= h * c;
      for (auto [a, b] : nn)
        out(static_cast<Eigen::Index>(x ^ (std::size_t{1} << a) ^ (std::size_t{1} << b))) += v * c;
    }
  };

  GroundState gs;
  if (n <= 256) {
    RealMatrix hm(n, n);
    RealVector e(static_cast<Eigen::Index>(n)), col(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
      e.setZero();
      e(static_cast<Eigen::Index>(x)) = 1.0;
      apply(e, col);
      hm.col(static_cast<Eigen::Index>(x)) = col;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hm);
    gs.energy = es.eigenvalues()(0);
    gs.state = es.eigenvectors().col(0);
    return gs;
  }
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  RealVector guess(static_cast<Eigen::Index>(n));
  for (auto& c : guess) c = g(rng);
  const auto res = linalg::lanczos_lowest(apply, guess, 1e-11, 60, 1000);
  require(res.residual < 1e-8, ErrorCode::NonConvergence, "Lanczos did not converge");
  gs.energy = res.value;
  gs.state = res.vector;
  return gs;
}

// ---------------------------------------------------------------------------
// Two-site DMRG

void DmrgConfig::validate() const {
  require(chain_length >= 4 && chain_length % 2 == 0, ErrorCode::InvalidArgument,
          "chain length must be even and at least 4");
  require(bond_dim >= 1, ErrorCode::InvalidArgument, "bond dimension must be positive");
  require(sweep_tol > 0 && max_sweeps >= 1, ErrorCode::InvalidArgument, "bad sweep settings");
}

namespace {

using Mat2 = Eigen::Matrix2d;
using Env = std::array<RealMatrix, 5>;  // one (bra, ket) matrix per MPO bond; empty = zero

struct MpoTerm {
  int from;
  int to;
  Mat2 op;
};

Mat2 pauli(char p) {
  Mat2 m;
  switch (p) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'i': m.setIdentity(); break;
    default: fail(ErrorCode::InvalidArgument, "real MPS supports only x, z and identity");
  }
  return m;
}

// Finite-state machine: 0 = nothing placed yet, 4 = term complete.
std::vector<MpoTerm> sdim_mpo(const SpinChainModel& m) {
  const Mat2 id = pauli('i'), x = pauli('x'), z = pauli('z');
  return {{0, 0, id},
          {0, 1, z},
          {0, 2, x},
          {0, 4, -m.h_field * x},
          {1, 4, -m.j_coupling * z},
          {1, 3, id},
          {2, 4, m.v_perturbation * x},
          {3, 4, m.v_perturbation * z},
          {4, 4, id}};
}

void accumulate(RealMatrix& dst, double c, const RealMatrix& src) {
  if (dst.size() == 0) dst = c * src;
  else dst.noalias() += c * src;
}

Env grow_left(const Env& l, const std::array<RealMatrix, 2>& a, const std::vector<MpoTerm>& mpo) {
  Env out;
  for (int w = 0; w < 5; ++w) {
    if (l[w].size() == 0) continue;
    std::array<std::array<RealMatrix, 2>, 2> p;
    for (int s = 0; s < 2; ++s) {
      const RealMatrix t = l[w] * a[s];
      for (int sp = 0; sp < 2; ++sp) p[sp][s] = a[sp].transpose() * t;
    }
    for (const auto& term : mpo) {
      if (term.from != w) continue;
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s)
          if (term.op(sp, s) != 0.0) accumulate(out[term.to], term.op(sp, s), p[sp][s]);
    }
  }
  return out;
}

Env grow_right(const Env& r, const std::array<RealMatrix, 2>& b, const std::vector<MpoTerm>& mpo) {
  Env out;
  for (int w = 0; w < 5; ++w) {
    if (r[w].size() == 0) continue;
    std::array<std::array<RealMatrix, 2>, 2> p;
    for (int s = 0; s < 2; ++s) {
      const RealMatrix t = r[w] * b[s].transpose();
      for (int sp = 0; sp < 2; ++sp) p[sp][s] = b[sp] * t;
    }
    for (const auto& term : mpo) {
      if (term.to != w) continue;
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s)
          if (term.op(sp, s) != 0.0) accumulate(out[term.from], term.op(sp, s), p[sp][s]);
    }
  }
  return out;
}

// y = H_eff theta for the two-site block; theta is four (Dl x Dr) blocks s1*2+s2.
void apply_two_site(const Env& l, const Env& r, const std::vector<MpoTerm>& mpo, Eigen::Index dl,
                    Eigen::Index dr, const RealVector& in, RealVector& out) {
  auto block = [&](const RealVector& v, int s) {
    return Eigen::Map<const RealMatrix>(v.data() + s * dl * dr, dl, dr);
  };
  std::array<std::array<RealMatrix, 4>, 5> t, u, v;
  for (int w = 0; w < 5; ++w) {
    if (l[w].size() == 0) continue;
    for (int s = 0; s < 4; ++s) t[w][s] = l[w] * block(in, s);
  }
  for (const auto& term : mpo) {
    if (t[term.from][0].size() == 0) continue;
    for (int s1p = 0; s1p < 2; ++s1p)
      for (int s1 = 0; s1 < 2; ++s1) {
        const double c = term.op(s1p, s1);
        if (c == 0.0) continue;
        for (int s2 = 0; s2 < 2; ++s2) accumulate(u[term.to][s1p * 2 + s2], c, t[term.from][s1 * 2 + s2]);
      }
  }
  for (const auto& term : mpo) {
    if (u[term.from][0].size() == 0 && u[term.from][1].size() == 0 && u[term.from][2].size() == 0 &&
        u[term.from][3].size() == 0)
      continue;
    for (int s2p = 0; s2p < 2; ++s2p)
      for (int s2 = 0; s2 < 2; ++s2) {
        const double c = term.op(s2p, s2);
        if (c == 0.0) continue;
        for (int s1p = 0; s1p < 2; ++s1p) {
          const RealMatrix& src = u[term.from][s1p * 2 + s2];
          if (src.size() != 0) accumulate(v[term.to][s1p * 2 + s2p], c, src);
        }
      }
  }
  out.setZero(in.size());
  for (int w = 0; w < 5; ++w) {
    if (r[w].size() == 0) continue;
    for (int s = 0; s < 4; ++s) {
      if (v[w][s].size() == 0) continue;
      Eigen::Map<RealMatrix>(out.data() + s * dl * dr, dl, dr).noalias() += v[w][s] * r[w].transpose();
    }
  }
}

void right_canonicalize(std::vector<std::array<RealMatrix, 2>>& sites) {
  for (int k = static_cast<int>(sites.size()) - 1; k >= 1; --k) {
    auto& b = sites[k];
    const Eigen::Index dl = b[0].rows(), dr = b[0].cols();
    RealMatrix mt(2 * dr, dl);  // transpose of [B0 B1]
    mt << b[0].transpose(), b[1].transpose();
    Eigen::HouseholderQR<RealMatrix> qr(mt);
    const Eigen::Index r = std::min(dl, 2 * dr);
    const RealMatrix q = qr.householderQ() * RealMatrix::Identity(2 * dr, r);
    const RealMatrix rt = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
    b[0] = q.topRows(dr).transpose();
    b[1] = q.bottomRows(dr).transpose();
    for (auto& m : sites[k - 1]) m = (m * rt).eval();
  }
  const double norm = std::sqrt(sites[0][0].squaredNorm() + sites[0][1].squaredNorm());
  for (auto& m : sites[0]) m /= norm;
}

}  // namespace

double FiniteMps::expectation(const std::vector<std::pair<int, char>>& ops) const {
  std::vector<char> label(sites.size(), 'i');
  for (auto [k, p] : ops) {
    require(k >= 0 && k < length(), ErrorCode::InvalidArgument, "operator site out of range");
    label[static_cast<std::size_t>(k)] = p;
  }
  RealMatrix num = RealMatrix::Ones(1, 1), den = RealMatrix::Ones(1, 1);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto& b = sites[k];
    const Mat2 o = pauli(label[k]);
    RealMatrix nn = RealMatrix::Zero(b[0].cols(), b[0].cols());
    for (int s = 0; s < 2; ++s) {
      const RealMatrix t = num * b[s];
      for (int sp = 0; sp < 2; ++sp)
        if (o(sp, s) != 0.0) nn.noalias() += o(sp, s) * b[sp].transpose() * t;
    }
    num = std::move(nn);
    den = (b[0].transpose() * den * b[0] + b[1].transpose() * den * b[1]).eval();
  }
  return num(0, 0) / den(0, 0);
}

double local_energy(const FiniteMps& mps, const SpinChainModel& m, int i) {
  require(i >= 1 && i + 1 < mps.length(), ErrorCode::InvalidArgument, "site must be interior");
  const double zz = mps.expectation({{i, 'z'}, {i + 1, 'z'}});
  const double x = mps.expectation({{i, 'x'}});
  const double xx = mps.expectation({{i, 'x'}, {i + 1, 'x'}});
  const double z2 = mps.expectation({{i - 1, 'z'}, {i + 1, 'z'}});
  return -(m.j_coupling * zz + m.h_field * x - m.v_perturbation * (xx + z2));
}

DmrgResult dmrg_ground_state(const SpinChainModel& model, const DmrgConfig& cfg) {
  cfg.validate();
  const int len = cfg.chain_length;
  int dmax = std::min(cfg.bond_dim, 4);
  const auto mpo = sdim_mpo(model);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::Index> bond(static_cast<std::size_t>(len + 1), 1);
  for (int k = 1; k < len; ++k) bond[k] = std::min({dmax, 2, 1 << std::min(k, 20), 1 << std::min(len - k, 20)});
  std::vector<std::array<RealMatrix, 2>> sites(static_cast<std::size_t>(len));
  for (int k = 0; k < len; ++k)
    for (auto& m : sites[k]) {
      m.resize(bond[k], bond[k + 1]);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
    }
  right_canonicalize(sites);

  std::vector<Env> lenv(static_cast<std::size_t>(len + 1)), renv(static_cast<std::size_t>(len + 1));
  lenv[0][0] = RealMatrix::Ones(1, 1);
  renv[len][4] = RealMatrix::Ones(1, 1);
  for (int k = len - 1; k >= 1; --k) renv[k] = grow_right(renv[k + 1], sites[k], mpo);

  DmrgResult out;
  double energy = 0.0;
  double worst_discard = 0.0;

  auto optimize = [&](int k, bool moving_right) {
    const Eigen::Index dl = sites[k][0].rows(), dr = sites[k + 1][0].cols();
    RealVector theta(4 * dl * dr);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        Eigen::Map<RealMatrix>(theta.data() + (s1 * 2 + s2) * dl * dr, dl, dr) =
            sites[k][s1] * sites[k + 1][s2];
    const Env& l = lenv[k];
    const Env& r = renv[k + 2];
    const auto res = linalg::lanczos_lowest(
        [&](const RealVector& x, RealVector& y) { apply_two_site(l, r, mpo, dl, dr, x, y); }, theta,
        1e-9, 24, 200);
    energy = res.value;

    RealMatrix m(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        m.block(s1 * dl, s2 * dr, dl, dr) =
            Eigen::Map<const RealMatrix>(res.vector.data() + (s1 * 2 + s2) * dl * dr, dl, dr);
    Eigen::BDCSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    Eigen::Index keep = 1;
    while (keep < std::min<Eigen::Index>(dmax, sv.size()) && sv(keep) > 1e-14 * sv(0)) ++keep;
    const double total = sv.squaredNorm();
    worst_discard = std::max(worst_discard, (total - sv.head(keep).squaredNorm()) / total);
    const RealVector s = sv.head(keep) / sv.head(keep).norm();
    const RealMatrix u = svd.matrixU().leftCols(keep);
    const RealMatrix vt = svd.matrixV().leftCols(keep).transpose();
    if (moving_right) {
      const RealMatrix svt = s.asDiagonal() * vt;
      for (int q = 0; q < 2; ++q) {
        sites[k][q] = u.block(q * dl, 0, dl, keep);
        sites[k + 1][q] = svt.block(0, q * dr, keep, dr);
      }
      lenv[k + 1] = grow_left(lenv[k], sites[k], mpo);
    } else {
      const RealMatrix us = u * s.asDiagonal();
      for (int q = 0; q < 2; ++q) {
        sites[k][q] = us.block(q * dl, 0, dl, keep);
        sites[k + 1][q] = vt.block(0, q * dr, keep, dr);
      }
      renv[k + 1] = grow_right(renv[k + 2], sites[k + 1], mpo);
    }
  };

  bool converged = false;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    // Ramp the bond dimension so early sweeps settle the long-wavelength structure cheaply.
    dmax = std::min(cfg.bond_dim, 4 << sweep);
    worst_discard = 0.0;
    for (int k = 0; k + 1 < len; ++k) optimize(k, true);
    for (int k = len - 2; k >= 0; --k) optimize(k, false);
    out.sweep_energies.push_back(energy);
    const std::size_t n = out.sweep_energies.size();
    if (n >= 2 && dmax == cfg.bond_dim && std::abs(out.sweep_energies[n - 1] - out.sweep_energies[n - 2]) < cfg.sweep_tol) {
      converged = true;
      break;
    }
  }
  require(converged, ErrorCode::NonConvergence, "DMRG did not converge within max_sweeps");
  out.energy = energy;
  out.truncation_error = worst_discard;
  out.mps.sites = std::move(sites);
  const int c = len / 2;
  out.bulk_energy = 0.5 * (local_energy(out.mps, model, c - 1) + local_energy(out.mps, model, c));
  return out;
}

// ---------------------------------------------------------------------------
// Bulk tensor and isometry embedding

namespace {

RealMatrix polar_real(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

BulkTensor bulk_tensor(const FiniteMps& mps, int bond_dim) {
  const int len = mps.length();
  require(len >= 4, ErrorCode::InvalidArgument, "chain too short for a bulk tensor");
  require(bond_dim >= 1, ErrorCode::InvalidArgument, "bond dimension must be positive");
  const int c = len / 2 - 1;

  // Left reduced density matrices on bonds c, c+1, c+2 (bond k sits left of site k).
  std::vector<RealMatrix> rho;
  RealMatrix cur = RealMatrix::Ones(1, 1);
  for (int k = 0; k <= c + 1; ++k) {
    if (k >= c) rho.push_back(cur / cur.trace());
    const auto& b = mps.sites[static_cast<std::size_t>(k)];
    cur = (b[0].transpose() * cur * b[0] + b[1].transpose() * cur * b[1]).eval();
  }
  rho.push_back(cur / cur.trace());

  std::array<RealMatrix, 3> w;
  RealVector schmidt;
  for (int i = 0; i < 3; ++i) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(rho[i]);
    w[i] = es.eigenvectors().rowwise().reverse();
    if (i == 0) schmidt = es.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  }
  const Eigen::Index d = std::min({w[0].cols(), w[1].cols(), w[2].cols()});

  std::array<RealMatrix, 2> b0, b1;
  for (int s = 0; s < 2; ++s) {
    b0[s] = (w[0].transpose() * mps.sites[c][s] * w[1]).topLeftCorner(d, d);
    b1[s] = (w[1].transpose() * mps.sites[c + 1][s] * w[2]).topLeftCorner(d, d);
  }

  // Align gauges: B_{c+1} ~ P B_c Q. Signs first, from the rank-one pattern of
  // the elementwise products, then alternating orthogonal Procrustes.
  const RealMatrix pattern = b1[0].cwiseProduct(b0[0]) + b1[1].cwiseProduct(b0[1]);
  Eigen::JacobiSVD<RealMatrix> psvd(pattern, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealMatrix p = RealMatrix::Zero(d, d), q = RealMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    p(i, i) = psvd.matrixU()(i, 0) < 0 ? -1.0 : 1.0;
    q(i, i) = psvd.matrixV()(i, 0) < 0 ? -1.0 : 1.0;
  }
  auto mismatch = [&] {
    return std::sqrt((b1[0] - p * b0[0] * q).squaredNorm() + (b1[1] - p * b0[1] * q).squaredNorm());
  };
  double prev = mismatch();
  for (int it = 0; it < 200; ++it) {
    p = polar_real(b1[0] * (b0[0] * q).transpose() + b1[1] * (b0[1] * q).transpose());
    q = polar_real((p * b0[0]).transpose() * b1[0] + (p * b0[1]).transpose() * b1[1]);
    const double now = mismatch();
    if (prev - now < 1e-15) {
      prev = now;
      break;
    }
    prev = now;
  }

  const Eigen::Index keep = std::min<Eigen::Index>(bond_dim, d);
  RealMatrix row(keep, 2 * keep);
  row << (p * b0[0]).topLeftCorner(keep, keep), (p * b0[1]).topLeftCorner(keep, keep);
  row = polar_real(row.transpose()).transpose();

  BulkTensor out;
  out.gauge_mismatch = prev;
  out.schmidt = schmidt;
  out.tensor.a[0] = row.leftCols(keep).cast<cplx>();
  out.tensor.a[1] = row.rightCols(keep).cast<cplx>();
  return out;
}

TargetUnitary embed_isometry(const MpsTensor& t, int cutoff) {
  const int mb = t.bond_dim();
  require(cutoff >= mb, ErrorCode::InvalidArgument, "embedding cutoff must be at least the bond dimension");
  require(t.isometry_residual() < 1e-8, ErrorCode::InvalidArgument, "tensor is not an isometry");
  const int n = 2 * mb;
  Matrix w(n, n);
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < mb; ++i)
      for (int j = 0; j < mb; ++j) w(s * mb + j, i) = t.a[s](i, j);

  auto project_out = [&](Vector v, int cols) {
    for (int pass = 0; pass < 2; ++pass)
      v -= w.leftCols(cols) * (w.leftCols(cols).adjoint() * v);
    return v;
  };
  for (int i = 0; i < mb; ++i)
    require(project_out(w.col(i), i).norm() > 1e-10, ErrorCode::RankDeficiency,
            "isometry columns are linearly dependent");
  int filled = mb;
  for (int k = 0; k < n && filled < n; ++k) {
    const Vector v = project_out(Vector::Unit(n, k), filled);
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    w.col(filled++) = v / norm;
  }
  require(filled == n, ErrorCode::RankDeficiency, "could not complete the isometry");

  TargetUnitary out;
  out.logical_dim = mb;
  out.cutoff = cutoff;
  out.matrix = Matrix::Identity(2 * cutoff, 2 * cutoff);
  for (int q = 0; q < 2; ++q)
    for (int r = 0; r < 2; ++r)
      out.matrix.block(q * cutoff, r * cutoff, mb, mb) = w.block(q * mb, r * mb, mb, mb);
  return out;
}

void to_json(nlohmann::json& j, const TargetUnitary& t) {
  j = nlohmann::json{{"logical_dim", t.logical_dim},
                     {"cutoff", t.cutoff},
                     {"matrix", matrix_to_json(t.matrix)}};
}

void from_json(const nlohmann::json& j, TargetUnitary& t) {
  t.logical_dim = j.at("logical_dim").get<int>();
  t.cutoff = j.at("cutoff").get<int>();
  t.matrix = matrix_from_json(j.at("matrix"));
  require(t.matrix.rows() == 2 * t.cutoff && t.matrix.cols() == 2 * t.cutoff, ErrorCode::Schema,
          "target matrix must be 2 cutoff square");
}

void to_json(nlohmann::json& j, const MpsTensor& t) {
  j = nlohmann::json{{"bond_dim", t.bond_dim()},
                     {"leakage", t.leakage},
                     {"a", {matrix_to_json(t.a[0]), matrix_to_json(t.a[1])}}};
}

void from_json(const nlohmann::json& j, MpsTensor& t) {
  const auto& a = j.at("a");
  require(a.is_array() && a.size() == 2, ErrorCode::Schema, "tensor needs two matrices");
  t.a[0] = matrix_from_json(a[0]);
  t.a[1] = matrix_from_json(a[1]);
  t.leakage = j.value("leakage", 0.0);
  require(t.a[0].rows() == t.a[0].cols() && t.a[0].rows() == t.a[1].rows() &&
              t.a[1].rows() == t.a[1].cols(),
          ErrorCode::Schema, "tensor matrices must be square and equal");
}

double central_correlation(const FiniteMps& mps, char a, char b, int r) {
  const int l = mps.length();
  require(r >= 1 && r < l / 2, ErrorCode::InvalidArgument, "separation out of range");
  const int lo = l / 4, hi = 3 * l / 4 - r;
  double sum = 0.0;
  for (int i = lo; i < hi; ++i) {
    const auto pa = std::pair<int, char>{i, a}, pb = std::pair<int, char>{i + r, b};
    sum += (b == 'i') ? mps.expectation({pa}) : mps.expectation({pa, pb});
  }
  return sum / (hi - lo);
}

}  // namespace holoqed
