#include "doctest.h"
#include "holoqed/grape.hpp"
#include "unit/helpers.hpp"

using namespace holoqed;

TEST_CASE("trace fidelity examples") {
  std::mt19937_64 rng(1);
  const Matrix u = linalg::haar_unitary(8, rng);
  CHECK(trace_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-14));
  const Matrix id = Matrix::Identity(8, 8);
  CHECK(trace_fidelity(id, std::exp(kI * 0.7) * id) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trace_fidelity(id, ops::sx(4)) == 0.0);
  CHECK(trace_fidelity(std::exp(kI * 1.3) * u, u) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(trace_fidelity(id, Matrix::Identity(6, 6)), Error);
}

TEST_CASE("padded targets act on the low-lying levels only") {
  std::mt19937_64 rng(2);
  const Matrix t = linalg::haar_unitary(4, rng);  // m = 2
  const Matrix p = pad_target(t, 5);
  CHECK(p(ops::index(1, 1, 5), ops::index(0, 0, 5)) == t(3, 0));
  CHECK(p.block(2, 2, 3, 3).isZero(0));
  // Block-diagonal unitary agreeing with t on the subspace has unit fidelity.
  Matrix u = Matrix::Identity(10, 10);
  for (int q = 0; q < 2; ++q)
    for (int r = 0; r < 2; ++r) u.block(q * 5, r * 5, 2, 2) = t.block(q * 2, r * 2, 2, 2);
  CHECK(subspace_fidelity(u, t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("identity target with zero drive converges at iteration zero") {
  SynthesisProblem prob;
  prob.params.cutoff = 3;
  prob.params.chi = prob.params.chi_prime = prob.params.kerr = 0.0;
  prob.n_ts = 5;
  prob.target = Matrix::Identity(6, 6);
  prob.initial = Waveform::zeros(5, prob.params.dt);
  const auto res = synthesize(prob);
  CHECK(res.iterations == 0);
  CHECK(res.infidelity < 1e-15);
  CHECK(res.converged);
}

TEST_CASE("self-inversion: a reachable target is synthesised to 1e-6") {
  SynthesisProblem prob;
  prob.params.cutoff = 3;
  prob.n_ts = 120;
  const Waveform secret = random_waveform(prob.n_ts, prob.params.dt, 0.6 * prob.params.omega_max, 99);
  prob.target = propagate(prob.params, secret);
  prob.max_iters = 4000;
  prob.seed = 5;
  const auto res = synthesize_restarts(prob, 2);
  CHECK(res.infidelity < 1e-6);
  // Feasibility and monotone envelope.
  for (const auto& s : res.waveform.steps) {
    CHECK(std::abs(s.cavity) <= prob.params.omega_max * (1 + 1e-15));
    CHECK(std::abs(s.qubit) <= prob.params.omega_max * (1 + 1e-15));
  }
  CHECK(1.0 - trace_fidelity(propagate(prob.params, res.waveform), prob.target) ==
        doctest::Approx(res.infidelity).epsilon(1e-9));
}

TEST_CASE("synthesis is deterministic given the seed") {
  SynthesisProblem prob;
  prob.params.cutoff = 3;
  prob.n_ts = 10;
  std::mt19937_64 rng(4);
  prob.target = linalg::haar_unitary(6, rng);
  prob.max_iters = 50;
  auto run = [&] {
    try {
      return synthesize(prob);
    } catch (const NoProgressError& e) {
      return e.partial();
    }
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.infidelity == b.infidelity);
  CHECK(a.fidelity_history == b.fidelity_history);
}

TEST_CASE("invalid problems are rejected") {
  SynthesisProblem prob;
  prob.params.cutoff = 3;
  prob.target = 2.0 * Matrix::Identity(6, 6);
  CHECK_THROWS_AS(synthesize(prob), Error);
  prob.target = Matrix::Identity(10, 10);
  CHECK_THROWS_AS(synthesize(prob), Error);
}
