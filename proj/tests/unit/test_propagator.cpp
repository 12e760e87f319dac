#include "doctest.h"
#include "holoqed/errors.hpp"
#include "holoqed/propagator.hpp"
#include "json.hpp"
#include "unit/helpers.hpp"

using namespace holoqed;

TEST_CASE("zero drive with zero nonlinearity is the identity") {
  DeviceParams p;
  p.chi = p.chi_prime = p.kerr = 0.0;
  const Matrix u = propagate(p, Waveform::zeros(1, p.dt));
  CHECK(max_abs(u - Matrix::Identity(p.dim(), p.dim())) == 0.0);
}

TEST_CASE("zero drive gives the diagonal eigenphases of H1") {
  const DeviceParams p;
  const std::size_t n_ts = 37;
  const Matrix u = propagate(p, Waveform::zeros(n_ts, p.dt));
  const Matrix h = build_static_hamiltonian(p);
  const double tau = p.dt * n_ts;
  for (int k = 0; k < p.dim(); ++k) {
    CHECK(std::abs(u(k, k) - std::exp(-kI * h(k, k).real() * tau)) < 1e-12);
  }
  CHECK(max_abs(u - Matrix(u.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("single step matches the spectral oracle") {
  std::mt19937_64 rng(21);
  DeviceParams p;
  for (int trial = 0; trial < 10; ++trial) {
    const Waveform wf = testing::random_waveform(1, p.omega_max, rng);
    const Matrix h = CqedOperators(p).hamiltonian(wf.steps[0].cavity, wf.steps[0].qubit);
    CHECK(max_abs(propagate(p, wf) - testing::spectral_exp(h, p.dt)) < 1e-9);
  }
}

TEST_CASE("random 16-dimensional Hermitian step agrees with the spectral oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = testing::random_hermitian(16, rng, 0.05);
    CHECK(max_abs(linalg::expm(-kI * 10.0 * h) - testing::spectral_exp(h, 10.0)) < 1e-9);
  }
}

TEST_CASE("propagation is unitary and composes in time order") {
  std::mt19937_64 rng(8);
  DeviceParams p;
  p.cutoff = 6;
  const Waveform w1 = testing::random_waveform(30, p.omega_max, rng);
  const Waveform w2 = testing::random_waveform(45, p.omega_max, rng);
  Waveform joined = w1;
  joined.steps.insert(joined.steps.end(), w2.steps.begin(), w2.steps.end());
  const Matrix u1 = propagate(p, w1);
  const Matrix u2 = propagate(p, w2);
  const Matrix u = propagate(p, joined);
  CHECK(unitarity_residual(u) < 1e-10);
  CHECK(max_abs(u - u2 * u1) < 1e-10);
  const CqedOperators ops(p);
  CHECK(max_abs(StepwisePropagation(ops, joined).unitary() - u) < 1e-10);
}

TEST_CASE("long waveforms stay unitary") {
  std::mt19937_64 rng(9);
  DeviceParams p;
  p.cutoff = 4;
  const Matrix u = propagate(p, testing::random_waveform(10000, p.omega_max, rng));
  CHECK(unitarity_residual(u) < 1e-10);
}

TEST_CASE("waveform validation") {
  DeviceParams p;
  Waveform wf = Waveform::zeros(3, p.dt);
  wf.steps[1].qubit = 1.5 * p.omega_max;
  CHECK_THROWS_AS(propagate(p, wf), Error);
  CHECK_THROWS_AS(propagate(p, Waveform::zeros(0, p.dt)), Error);
}

namespace {

double overlap_of(const DeviceParams& p, const Matrix& target, const RealVector& x,
                  DriveChannels ch = {}) {
  return std::abs((target.adjoint() * propagate(p, Waveform::from_params(x, p.dt), ch)).trace());
}

void check_against_fd(const DeviceParams& p, const Waveform& wf, const Matrix& target) {
  const auto res = propagate_with_gradient(p, wf, target);
  const RealVector fd = testing::central_difference(
      [&](const RealVector& x) { return overlap_of(p, target, x); }, wf.to_params(),
      1e-7 * p.omega_max);
  const double scale = res.gradient.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < fd.size(); ++i) {
    CHECK(std::abs(res.gradient(i) - fd(i)) <= 1e-5 * std::max(std::abs(fd(i)), 1e-2 * scale));
  }
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(31);
  DeviceParams p;
  p.cutoff = 4;
  for (int trial = 0; trial < 3; ++trial) {
    const Waveform wf = testing::random_waveform(12, p.omega_max, rng, 0.9);
    const Matrix target = linalg::haar_unitary(p.dim(), rng);
    check_against_fd(p, wf, target);
  }
}

TEST_CASE("gradient check at a perfectly synthesised point") {
  std::mt19937_64 rng(32);
  DeviceParams p;
  p.cutoff = 3;
  const Waveform wf = testing::random_waveform(10, p.omega_max, rng, 0.8);
  const Matrix target = propagate(p, wf);
  const auto res = propagate_with_gradient(p, wf, target);
  CHECK(res.overlap == doctest::Approx(p.dim()).epsilon(1e-12));
  // At the maximum the gradient vanishes; compare absolutely against the FD oracle.
  const RealVector fd = testing::central_difference(
      [&](const RealVector& x) { return overlap_of(p, target, x); }, wf.to_params(),
      1e-7 * p.omega_max);
  CHECK((res.gradient - fd).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(res.gradient.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("disabled qubit drive has exactly zero gradient") {
  std::mt19937_64 rng(33);
  DeviceParams p;
  p.cutoff = 4;
  const Waveform wf = testing::random_waveform(1, p.omega_max, rng);
  const Matrix target = linalg::haar_unitary(p.dim(), rng);
  const auto res = propagate_with_gradient(p, wf, target, DriveChannels{true, false});
  CHECK(res.gradient(2) == 0.0);
  CHECK(res.gradient(3) == 0.0);
  CHECK(res.gradient(0) != 0.0);
}

TEST_CASE("waveform JSON layout") {
  Waveform wf = Waveform::zeros(2, 10.0);
  wf.steps[1].cavity = cplx(0.01, -0.02);
  const nlohmann::json j = wf;
  CHECK(j.at("dt_ns").get<double>() == 10.0);
  CHECK(j.at("steps")[1][1].get<double>() == -0.02);
  const auto back = j.get<Waveform>();
  CHECK(back.steps[1].cavity == wf.steps[1].cavity);
}
