#include "doctest.h"
#include "holoqed/errors.hpp"
#include "holoqed/vqe.hpp"
#include "unit/helpers.hpp"

using namespace holoqed;

namespace {

VqeProblem small_problem(int cutoff, std::size_t n_ts) {
  VqeProblem p;
  p.params.cutoff = cutoff;
  p.n_ts = n_ts;
  p.bond_levels = 2;
  return p;
}

}  // namespace

TEST_CASE("zero waveform gives the product-state energy") {
  VqeProblem p = small_problem(8, 5);
  const auto ev = evaluate_vqe(Waveform::zeros(5, p.params.dt), p);
  CHECK(ev.energy == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ev.penalty == 0.0);
}

TEST_CASE("hard cavity drive populates the buffer") {
  VqeProblem p = small_problem(6, 20);
  Waveform wf = Waveform::zeros(20, p.params.dt);
  for (auto& s : wf.steps) {
    s.cavity = p.params.omega_max;
    s.qubit = 0.5 * p.params.omega_max;
  }
  CHECK(evaluate_vqe(wf, p).penalty > 0.0);
}

TEST_CASE("ideal objective gradient matches finite differences") {
  std::mt19937_64 rng(1);
  VqeProblem p = small_problem(4, 8);
  p.model.v_perturbation = 0.3;
  const Waveform wf = testing::random_waveform(8, p.params.omega_max, rng, 0.9, p.params.dt);
  const RealVector g = evaluate_vqe(wf, p, true).gradient;
  const RealVector fd = testing::central_difference(
      [&](const RealVector& x) { return evaluate_vqe(Waveform::from_params(x, wf.dt), p).objective(); },
      wf.to_params(), 1e-6);
  CHECK((g - fd).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
}

TEST_CASE("noisy objective gradient matches finite differences") {
  std::mt19937_64 rng(2);
  VqeProblem p = small_problem(3, 6);
  NoiseSpec n;
  n.t1_cavity = 5000.0;
  n.t1_qubit = 2000.0;
  n.t2_qubit = 1000.0;
  p.noise = n;
  const Waveform wf = testing::random_waveform(6, p.params.omega_max, rng, 0.9, p.params.dt);
  const RealVector g = evaluate_vqe(wf, p, true).gradient;
  const RealVector fd = testing::central_difference(
      [&](const RealVector& x) { return evaluate_vqe(Waveform::from_params(x, wf.dt), p).objective(); },
      wf.to_params(), 1e-6);
  CHECK((g - fd).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
}

TEST_CASE("noiseless limit of the noisy objective") {
  std::mt19937_64 rng(3);
  VqeProblem p = small_problem(5, 30);
  const Waveform wf = testing::random_waveform(30, p.params.omega_max, rng, 0.7, p.params.dt);
  const auto ideal = evaluate_vqe(wf, p);
  NoiseSpec quiet;
  quiet.scale = 1e12;
  p.noise = quiet;
  const auto noisy = evaluate_vqe(wf, p);
  CHECK(std::abs(noisy.objective() - ideal.objective()) < 1e-6);
  // Paper noise raises the energy of this waveform.
  p.noise = NoiseSpec{};
  CHECK(std::abs(evaluate_vqe(wf, p).energy - ideal.energy) > 0.0);
}

TEST_CASE("a one-step batch cannot end above the product state") {
  VqeProblem p = small_problem(8, 1);
  p.batch = 1;
  p.max_iters = 200;
  const auto r = run_vqe(p);
  CHECK(r.energy <= -0.5);
  CHECK(r.runs.size() == 1);
}

TEST_CASE("batch runs are deterministic and report the best") {
  VqeProblem p = small_problem(5, 40);
  p.batch = 3;
  p.max_iters = 40;
  const auto a = run_vqe(p);
  const auto b = run_vqe(p);
  CHECK(a.energy == b.energy);
  for (const auto& run : a.runs) CHECK(run.objective >= a.runs[a.best_run].objective);
  CHECK(a.energy + a.penalty == a.runs[a.best_run].objective);
}

TEST_CASE("problem validation") {
  VqeProblem p;
  p.params.cutoff = 4;  // cutoff - 6 leaves no usable levels
  CHECK_THROWS_AS(run_vqe(p), Error);
  p.bond_levels = 2;
  p.penalty_weight = 0.0;
  CHECK_THROWS_AS(run_vqe(p), Error);
  p.penalty_weight = 10.0;
  CHECK_THROWS_AS(run_noisy_vqe(p), Error);
  p.initial = Waveform::zeros(3, 10.0);
  CHECK_THROWS_AS(run_vqe(p), Error);
}
