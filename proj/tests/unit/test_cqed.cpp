#include "doctest.h"
#include "holoqed/cqed.hpp"
#include "holoqed/errors.hpp"
#include "json.hpp"

using namespace holoqed;

namespace {

// Ladder-operator oracle for the static Hamiltonian, built from matrix products.
Matrix ladder_static(const DeviceParams& p) {
  const Matrix a = ops::a(p.cutoff);
  const Matrix ad = a.adjoint();
  const Matrix quartic = ad * ad * a * a;
  const Matrix n = ad * a;
  const Matrix z = ops::sz(p.cutoff);
  return 0.5 * p.kerr * quartic + 0.5 * p.chi * n * z + 0.5 * p.chi_prime * quartic * z;
}

}  // namespace

TEST_CASE("default device parameters are the published values") {
  const DeviceParams p;
  CHECK(p.chi == doctest::Approx(-2 * kPi * 2194e-6));
  CHECK(p.omega_max == doctest::Approx(2 * kPi * 0.01));
  CHECK(p.t1_cavity == 2.7e6);
  CHECK(p.t2_qubit == 43e3);
  CHECK_NOTHROW(p.validate());
  DeviceParams bad = p;
  bad.cutoff = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("static Hamiltonian matrix elements") {
  const DeviceParams p;
  const Matrix h = build_static_hamiltonian(p);
  const int c = p.cutoff;
  CHECK(h(0, 0) == cplx(0.0));
  CHECK(h(ops::index(0, 1, c), ops::index(0, 1, c)).real() == doctest::Approx(p.chi / 2));
  CHECK(h(ops::index(0, 1, c), ops::index(0, 1, c)).real() ==
        doctest::Approx(-kPi * 2194e-6));
  DeviceParams kerr_only = p;
  kerr_only.chi = kerr_only.chi_prime = 0.0;
  const Matrix hk = build_static_hamiltonian(kerr_only);
  CHECK(hk(ops::index(0, 2, c), ops::index(0, 2, c)).real() == doctest::Approx(p.kerr));
  CHECK(max_abs(h - ladder_static(p)) < 1e-15);
}

TEST_CASE("static Hamiltonian is Hermitian and commutes with n and sz") {
  for (int c : {2, 5, 12}) {
    DeviceParams p;
    p.cutoff = c;
    const Matrix h = build_static_hamiltonian(p);
    CHECK(hermiticity_residual(h) < 1e-14);
    const Matrix n = ops::number(c);
    const Matrix z = ops::sz(c);
    CHECK(max_abs(h * n - n * h) == 0.0);
    CHECK(max_abs(h * z - z * h) == 0.0);
  }
}

TEST_CASE("ladder operators obey [a, a+] = 1 below the truncation") {
  const int c = 6;
  const Matrix a = ops::annihilation(c);
  const Matrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < c - 1; ++n) {
    for (int m = 0; m < c - 1; ++m) CHECK(std::abs(comm(n, m) - (n == m ? 1.0 : 0.0)) < 1e-14);
  }
  CHECK(std::abs(comm(c - 1, c - 1) - cplx(1.0 - c)) < 1e-14);
}

TEST_CASE("drive Hamiltonian examples") {
  const DeviceParams p;
  const int c = p.cutoff;
  CHECK(max_abs(build_drive_hamiltonian(p, 0.0, 0.0)) == 0.0);
  const double r = 0.3 * p.omega_max;
  CHECK(max_abs(build_drive_hamiltonian(p, 0.0, r) - r * ops::sx(c)) < 1e-16);
  const Matrix h = build_drive_hamiltonian(p, cplx(0.0, r), 0.0);
  CHECK(std::abs(h(ops::index(0, 0, c), ops::index(0, 1, c)) - cplx(0.0, r)) < 1e-16);
  CHECK(std::abs(h(ops::index(0, 1, c), ops::index(0, 0, c)) - cplx(0.0, -r)) < 1e-16);
  CHECK_THROWS_AS(build_drive_hamiltonian(p, 1.01 * p.omega_max, 0.0), Error);
  try {
    build_drive_hamiltonian(p, 0.0, cplx(0.0, 2 * p.omega_max));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmplitudeBound);
  }
}

TEST_CASE("drive couples only neighbouring photon numbers or flips the qubit") {
  DeviceParams p;
  p.cutoff = 7;
  const int c = p.cutoff;
  const Matrix h = build_drive_hamiltonian(p, cplx(0.01, -0.02), cplx(-0.03, 0.015));
  CHECK(hermiticity_residual(h) < 1e-14);
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n < c; ++n)
      for (int r = 0; r < 2; ++r)
        for (int m = 0; m < c; ++m) {
          const bool allowed = (q == r && std::abs(n - m) == 1) || (q != r && n == m);
          if (!allowed) CHECK(h(ops::index(q, n, c), ops::index(r, m, c)) == cplx(0.0));
        }
  const CqedOperators cached(p);
  const Matrix full = build_static_hamiltonian(p) + h;
  CHECK(max_abs(cached.hamiltonian(cplx(0.01, -0.02), cplx(-0.03, 0.015)) - full) < 1e-16);
}

TEST_CASE("device parameters round-trip through kHz JSON") {
  DeviceParams p;
  p.cutoff = 10;
  const nlohmann::json j = p;
  CHECK(j.at("chi").get<double>() == doctest::Approx(-2194.0));
  CHECK(j.at("omega_max").get<double>() == doctest::Approx(10000.0));
  const auto back = j.get<DeviceParams>();
  CHECK(back.chi == doctest::Approx(p.chi));
  CHECK(back.cutoff == 10);
  nlohmann::json bad = j;
  bad["dt"] = -1.0;
  CHECK_THROWS_AS(bad.get<DeviceParams>(), Error);
}
