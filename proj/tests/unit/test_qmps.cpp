#include "doctest.h"
#include "holoqed/cqed.hpp"
#include "holoqed/errors.hpp"
#include "holoqed/linalg.hpp"
#include "holoqed/qmps.hpp"
#include "unit/helpers.hpp"

using namespace holoqed;

namespace {

Matrix pauli(char p) {
  switch (p) {
    case 'x': return ops::pauli_x();
    case 'y': return ops::pauli_y();
    case 'z': return ops::pauli_z();
    default: return Matrix::Identity(2, 2);
  }
}

// Finite-chain oracle working directly with Kraus matrices (no vectorisation).
double chain_correlation(const MpsTensor& t, char a, char b, int r, int burn) {
  const int d = t.bond_dim();
  const Matrix k[2] = {t.kraus(0), t.kraus(1)};
  auto insert = [&](const Matrix& rho, const Matrix& o) {
    Matrix out = Matrix::Zero(d, d);
    for (int s = 0; s < 2; ++s)
      for (int sp = 0; sp < 2; ++sp) out += o(sp, s) * k[s] * rho * k[sp].adjoint();
    return out;
  };
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0;
  const Matrix id = Matrix::Identity(2, 2);
  for (int i = 0; i < burn; ++i) rho = insert(rho, id);
  rho = insert(rho, pauli(a));
  for (int i = 1; i < r; ++i) rho = insert(rho, id);
  rho = insert(rho, pauli(b));
  return rho.trace().real();
}

Matrix random_mixing_unitary(int cutoff, std::mt19937_64& rng) {
  return linalg::haar_unitary(2 * cutoff, rng);
}

}  // namespace

TEST_CASE("extraction examples") {
  const int c = 4;
  const MpsTensor id = extract_tensor(Matrix::Identity(2 * c, 2 * c), c);
  CHECK(id.a[0] == Matrix::Identity(c, c));
  CHECK(id.a[1].isZero(0));
  const MpsTensor flip = extract_tensor(ops::sx(c), c);
  CHECK(flip.a[0].isZero(0));
  CHECK(flip.a[1] == Matrix::Identity(c, c));
  CHECK(id.leakage == 0.0);
}

TEST_CASE("full-cutoff extraction is always an isometry") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int c = 2 + trial % 6;
    const MpsTensor t = extract_tensor(linalg::haar_unitary(2 * c, rng), c);
    CHECK(t.isometry_residual() < 1e-12);
    const MpsTensor cut = extract_tensor(linalg::haar_unitary(2 * c, rng), c - 1);
    CHECK(cut.leakage > 0.0);
    CHECK(cut.leakage < 1.0);
  }
}

TEST_CASE("fixed points of trivial channels") {
  const int c = 3;
  const SiteChannel ch = site_channel(extract_tensor(Matrix::Identity(2 * c, 2 * c), c));
  const auto fp = fixed_point(ch);
  CHECK(fp.iterations == 1);
  CHECK(std::abs(fp.rho(0, 0) - 1.0) < 1e-15);
  const Matrix rho = transfer_channel_fixed_point(extract_tensor(ops::sx(c), c));
  CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
}

TEST_CASE("product-state energies and correlators") {
  const int c = 3;
  const MpsTensor up = extract_tensor(Matrix::Identity(2 * c, 2 * c), c);
  CHECK(energy_density(up, SpinChainModel{}) == doctest::Approx(-0.5).epsilon(1e-14));
  const MpsTensor down = extract_tensor(ops::sx(c), c);
  for (int r = 1; r <= 4; ++r) {
    CHECK(correlation(down, 'z', 'z', r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(correlation(up, 'z', 'x', r)) < 1e-15);
  }
}

TEST_CASE("site map is trace preserving and keeps states positive") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int c = 2 + trial % 4;
    const MpsTensor t = extract_tensor(random_mixing_unitary(c, rng), c);
    const SiteChannel ch = site_channel(t);
    // Trace functional is a left fixed point of the plain channel.
    const Vector w = trace_functional(c);
    CHECK((ch.plain.transpose() * w - w).cwiseAbs().maxCoeff() < 1e-12);
    const auto fp = fixed_point(ch);
    CHECK(std::abs(fp.rho.trace() - 1.0) < 1e-12);
    CHECK(hermiticity_residual(fp.rho) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(fp.rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("stationary correlators match explicit finite-chain contraction") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const int c = 2 + trial % 3;
    const MpsTensor t = extract_tensor(random_mixing_unitary(c, rng), c);
    for (int r = 1; r <= 3; ++r) {
      for (auto [a, b] : {std::pair{'z', 'z'}, std::pair{'x', 'x'}, std::pair{'z', 'y'}}) {
        CHECK(std::abs(correlation(t, a, b, r) - chain_correlation(t, a, b, r, 200)) < 1e-6);
      }
    }
  }
}

TEST_CASE("energy density equals the sum of its correlators") {
  std::mt19937_64 rng(7);
  const MpsTensor t = extract_tensor(linalg::haar_unitary(8, rng), 4);
  const SpinChainModel m{0.9, 1.2, 0.4};
  const double e = -(m.j_coupling * correlation(t, 'z', 'z', 1) +
                     m.h_field * chain_correlation(t, 'x', 'i', 1, 300) -
                     m.v_perturbation * (correlation(t, 'x', 'x', 1) + correlation(t, 'z', 'z', 2)));
  CHECK(energy_density(t, m) == doctest::Approx(e).epsilon(1e-9));
}

TEST_CASE("non-mixing channels are reported") {
  // K^0 swaps levels 0 and 1 of the cavity: a period-2 orbit from vacuum.
  const int c = 2;
  Matrix u = Matrix::Zero(4, 4);
  u(ops::index(0, 1, c), ops::index(0, 0, c)) = 1.0;
  u(ops::index(0, 0, c), ops::index(0, 1, c)) = 1.0;
  u(ops::index(1, 0, c), ops::index(1, 0, c)) = 1.0;
  u(ops::index(1, 1, c), ops::index(1, 1, c)) = 1.0;
  const MpsTensor t = extract_tensor(u, c);
  CHECK_THROWS_AS(transfer_channel_fixed_point(t), Error);
}

TEST_CASE("sampling examples") {
  const int c = 3;
  const auto zeros = sample_chain(Matrix::Identity(6, 6), {'z', 'z', 'z'}, 20, 1);
  for (const auto& row : zeros)
    for (auto b : row) CHECK(b == 0);
  const auto ones = sample_chain(ops::sx(c), {'z', 'z'}, 20, 1);
  for (const auto& row : ones)
    for (auto b : row) CHECK(b == 1);
  CHECK(sample_chain(ops::sx(c), {'x'}, 5, 9) == sample_chain(ops::sx(c), {'x'}, 5, 9));
}

TEST_CASE("shot averages agree with channel expectations") {
  std::mt19937_64 rng(8);
  const int c = 3;
  const Matrix u = linalg::haar_unitary(2 * c, rng);
  const MpsTensor t = extract_tensor(u, c);
  const int shots = 20000;
  const auto samples = sample_chain(u, {'z', 'z', 'x', 'x'}, shots, 42, 60);
  double zz = 0.0, xx = 0.0;
  for (const auto& row : samples) {
    zz += (row[0] == row[1]) ? 1.0 : -1.0;
    xx += (row[2] == row[3]) ? 1.0 : -1.0;
  }
  zz /= shots;
  xx /= shots;
  const double czz = correlation(t, 'z', 'z', 1);
  const double cxx = correlation(t, 'x', 'x', 1);
  CHECK(std::abs(zz - czz) < 4.0 * std::sqrt((1 - czz * czz) / shots) + 1e-3);
  CHECK(std::abs(xx - cxx) < 4.0 * std::sqrt((1 - cxx * cxx) / shots) + 1e-3);
}
