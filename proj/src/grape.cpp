#include "holoqed/grape.hpp"

#include <random>

#include "holoqed/optimize.hpp"
#include "holoqed/parallel.hpp"
#include "json.hpp"

namespace holoqed {

double trace_fidelity(const Matrix& u, const Matrix& target) {
  require(u.rows() == target.rows() && u.cols() == target.cols(), ErrorCode::DimensionMismatch,
          "fidelity needs operators of equal dimension");
  return std::abs((target.adjoint() * u).trace()) / static_cast<double>(u.rows());
}

Matrix pad_target(const Matrix& target, int cutoff) {
  const Eigen::Index m = target.rows() / 2;
  require(target.rows() == target.cols() && target.rows() % 2 == 0 && m <= cutoff,
          ErrorCode::DimensionMismatch, "target must be 2m x 2m with m <= cutoff");
  Matrix out = Matrix::Zero(2 * cutoff, 2 * cutoff);
  for (int q = 0; q < 2; ++q)
    for (int r = 0; r < 2; ++r) out.block(q * cutoff, r * cutoff, m, m) = target.block(q * m, r * m, m, m);
  return out;
}

double subspace_fidelity(const Matrix& u, const Matrix& target) {
  require(u.rows() % 2 == 0, ErrorCode::DimensionMismatch, "joint operator needs even dimension");
  const Matrix padded = pad_target(target, static_cast<int>(u.rows() / 2));
  return std::abs((padded.adjoint() * u).trace()) / static_cast<double>(target.rows());
}

void SynthesisProblem::validate() const {
  params.validate();
  require(n_ts >= 1, ErrorCode::InvalidArgument, "n_ts must be at least 1");
  require(target.rows() == target.cols() && target.rows() % 2 == 0 &&
              target.rows() <= params.dim(),
          ErrorCode::DimensionMismatch, "target must be 2m x 2m with m <= cutoff");
  require(unitarity_residual(target) < 1e-10, ErrorCode::InvalidArgument, "target is not unitary");
  require(max_iters >= 0 && tol_infidelity >= 0 && learning_rate > 0, ErrorCode::InvalidArgument,
          "bad optimiser settings");
  if (initial) {
    require(initial->n_steps() == n_ts, ErrorCode::LengthMismatch, "initial waveform length != n_ts");
    initial->validate(params.omega_max);
  }
}

Waveform random_waveform(std::size_t n_ts, double dt, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] { return std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng)); };
  Waveform wf = Waveform::zeros(n_ts, dt);
  for (auto& s : wf.steps) {
    s.cavity = draw();
    s.qubit = draw();
  }
  return wf;
}

void project_unit_disc(RealVector& x, DriveChannels ch) {
  for (Eigen::Index k = 0; k < x.size(); k += 2) {
    const bool cavity = (k / 2) % 2 == 0;
    if ((cavity && !ch.cavity) || (!cavity && !ch.qubit)) {
      x(k) = x(k + 1) = 0.0;
      continue;
    }
    const double r = std::hypot(x(k), x(k + 1));
    if (r > 1.0) {
      x(k) /= r;
      x(k + 1) /= r;
    }
  }
}

SynthesisResult synthesize(const SynthesisProblem& problem) {
  problem.validate();
  const DeviceParams& p = problem.params;
  const CqedOperators ops(p);
  const Matrix padded = pad_target(problem.target, p.cutoff);
  const double norm = static_cast<double>(problem.target.rows());
  const double wmax = p.omega_max;

  Waveform start = problem.initial
                       ? *problem.initial
                       : random_waveform(problem.n_ts, p.dt, problem.init_radius * wmax, problem.seed);
  const RealVector x0 = start.to_params() / wmax;

  auto objective = [&](const RealVector& x, RealVector* grad) {
    const Waveform wf = Waveform::from_params(x * wmax, p.dt);
    const StepwisePropagation prop(ops, wf, problem.channels);
    const cplx z = (padded.adjoint() * prop.unitary()).trace();
    const double overlap = std::abs(z);
    if (grad) {
      const cplx phase = overlap > 0 ? std::conj(z) / overlap : cplx(0.0);
      *grad = -prop.gradient(phase * padded.adjoint()) * (wmax / norm);
    }
    return 1.0 - overlap / norm;
  };

  opt::AdamConfig cfg;
  cfg.learning_rate = problem.learning_rate;
  cfg.max_iters = problem.max_iters;
  cfg.target = problem.tol_infidelity;
  const opt::Trace trace = adam_minimize(objective, x0, cfg,
                                         [&](RealVector& x) { project_unit_disc(x, problem.channels); });

  SynthesisResult out;
  out.waveform = Waveform::from_params(trace.best_x * wmax, p.dt);
  for (double v : trace.history) out.fidelity_history.push_back(1.0 - v);
  out.infidelity = trace.best_value;
  out.iterations = trace.iterations;
  out.seed = problem.seed;
  out.converged = trace.reached_target;
  if (trace.stalled && !trace.reached_target) throw NoProgressError(std::move(out));
  return out;
}

SynthesisResult synthesize_restarts(const SynthesisProblem& problem, int restarts) {
  require(restarts >= 1, ErrorCode::InvalidArgument, "need at least one restart");
  std::vector<SynthesisResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), [&](std::size_t k) {
    SynthesisProblem local = problem;
    local.seed = problem.seed + k;
    if (k > 0) local.initial.reset();
    try {
      runs[k] = synthesize(local);
    } catch (const NoProgressError& e) {
      runs[k] = e.partial();
    }
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].infidelity < runs[best].infidelity) best = k;
  return runs[best];
}

void to_json(nlohmann::json& j, const SynthesisResult& r) {
  j = nlohmann::json{{"n_ts", r.waveform.n_steps()},
                     {"dt_ns", r.waveform.dt},
                     {"final_infidelity", r.infidelity},
                     {"iterations", r.iterations},
                     {"seed", r.seed},
                     {"converged", r.converged},
                     {"waveform", r.waveform}};
}

}  // namespace holoqed
