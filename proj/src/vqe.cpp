#include "holoqed/vqe.hpp"

#include <limits>

#include "holoqed/errors.hpp"
#include "holoqed/grape.hpp"
#include "holoqed/optimize.hpp"
#include "holoqed/parallel.hpp"

namespace holoqed {

void VqeProblem::validate() const {
  params.validate();
  require(n_ts >= 1, ErrorCode::InvalidArgument, "n_ts must be at least 1");
  require(usable_levels() >= 1 && usable_levels() <= params.cutoff, ErrorCode::InvalidArgument,
          "usable bond levels must lie in [1, cutoff]");
  require(penalty_weight > 0.0, ErrorCode::InvalidArgument, "penalty weight must be positive");
  require(batch >= 1, ErrorCode::InvalidArgument, "batch must be at least 1");
  require(max_iters >= 0 && learning_rate > 0.0 && init_radius >= 0.0 && stall_window >= 1, ErrorCode::InvalidArgument,
          "bad optimiser settings");
  if (noise) noise->validate();
  if (initial) {
    require(initial->n_steps() == n_ts, ErrorCode::LengthMismatch, "initial waveform length != n_ts");
    initial->validate(params.omega_max);
  }
}

namespace {

Vector vec(const Matrix& m) {
  const auto d = m.rows();
  Vector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m(i, j);
  return v;
}

// g += c * left right^T: the bilinear derivative of u^T A v with respect to A.
void add_outer(Matrix& g, const Vector& left, const Vector& right, double c) {
  g.noalias() += c * left * right.transpose();
}

// d Re tr(G_U dU) seen through the Kraus operators K^s = U block (s, 0).
Matrix unitary_gradient(const Matrix& u, int cutoff, const std::array<Matrix, 4>& g) {
  const int c = cutoff;
  std::array<Matrix, 2> k = {u.block(0, 0, c, c), u.block(c, 0, c, c)};
  std::array<Matrix, 2> gk = {Matrix::Zero(c, c), Matrix::Zero(c, c)};
  static const std::array<Matrix, 4> paulis = {Matrix::Identity(2, 2), ops::pauli_x(), ops::pauli_y(),
                                               ops::pauli_z()};
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      Matrix h = Matrix::Zero(c * c, c * c);
      for (int o = 0; o < 4; ++o)
        if (paulis[o](sp, s) != cplx(0.0)) h += paulis[o](sp, s) * g[o];
      if (h.isZero(0.0)) continue;
      const Matrix kc = k[sp].conjugate();
      for (int i = 0; i < c; ++i)
        for (int kk = 0; kk < c; ++kk)
          for (int j = 0; j < c; ++j)
            for (int l = 0; l < c; ++l) {
              const cplx hv = h(i * c + kk, j * c + l);
              gk[s](i, j) += hv * kc(kk, l);
              gk[sp](kk, l) += std::conj(hv * k[s](i, j));
            }
    }
  Matrix gu = Matrix::Zero(2 * c, 2 * c);
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < c; ++i) gu(i, s * c + j) = gk[s](j, i);
  return gu;
}

}  // namespace

ChannelEnergy channel_energy(const SiteChannel& ch, const SpinChainModel& m, int bond_levels,
                             double penalty_weight, bool with_gradient) {
  const int d = ch.dim;
  const auto fp = fixed_point(ch);
  ChannelEnergy out;
  out.rho = fp.rho;
  const Vector w = trace_functional(d);
  const Vector r = vec(fp.rho);
  const Matrix& t = ch.plain;
  const Matrix& x = ch.inserted[0];
  const Matrix& z = ch.inserted[2];
  const Vector xr = x * r, zr = z * r, tzr = t * zr;
  const double x1 = w.dot(xr).real();
  const double zz = w.dot(z * zr).real();
  const double xx = w.dot(x * xr).real();
  const double zz2 = w.dot(z * tzr).real();
  out.energy = -(m.j_coupling * zz + m.h_field * x1 - m.v_perturbation * (xx + zz2));
  out.buffer_population = buffer_population(fp.rho, bond_levels);
  out.penalty = penalty_weight * out.buffer_population;
  if (!with_gradient) return out;

  for (auto& g : out.gradient) g = Matrix::Zero(d * d, d * d);
  Matrix& gt = out.gradient[0];
  Matrix& gx = out.gradient[1];
  Matrix& gz = out.gradient[3];
  const Vector xtw = x.transpose() * w, ztw = z.transpose() * w;
  Vector gr = Vector::Zero(d * d);
  // -h w^T X r
  add_outer(gx, w, r, -m.h_field);
  gr += -m.h_field * xtw;
  // -J w^T Z Z r
  add_outer(gz, w, zr, -m.j_coupling);
  add_outer(gz, ztw, r, -m.j_coupling);
  gr += -m.j_coupling * z.transpose() * ztw;
  // +V w^T X X r
  add_outer(gx, w, xr, m.v_perturbation);
  add_outer(gx, xtw, r, m.v_perturbation);
  gr += m.v_perturbation * x.transpose() * xtw;
  // +V w^T Z T Z r
  const Vector tztw = t.transpose() * ztw;
  add_outer(gz, w, tzr, m.v_perturbation);
  add_outer(gt, ztw, zr, m.v_perturbation);
  add_outer(gz, tztw, r, m.v_perturbation);
  gr += m.v_perturbation * z.transpose() * tztw;
  // weight * buffer population
  for (int n = bond_levels; n < d; ++n) gr(n * d + n) += penalty_weight;
  // Stationarity: (I - T + r w^T) dr = dT r, with w^T dr = 0.
  const Matrix mm = Matrix::Identity(d * d, d * d) - t + r * w.transpose();
  const Vector y = mm.transpose().partialPivLu().solve(gr);
  add_outer(gt, y, r, 1.0);
  return out;
}

VqeEvaluation evaluate_vqe(const Waveform& wf, const VqeProblem& problem, bool with_gradient) {
  const DeviceParams& p = problem.params;
  const int levels = problem.usable_levels();
  VqeEvaluation out;
  if (problem.noise) {
    const NoisySuperchannel sc(p, *problem.noise, wf);
    const auto ce = channel_energy(sc.channel(), problem.model, levels, problem.penalty_weight, with_gradient);
    out.energy = ce.energy;
    out.penalty = ce.penalty;
    out.buffer_population = ce.buffer_population;
    if (with_gradient) out.gradient = sc.gradient(ce.gradient);
    return out;
  }
  wf.validate(p.omega_max);
  const CqedOperators ops(p);
  const StepwisePropagation prop(ops, wf);
  const SiteChannel ch = site_channel(extract_tensor(prop.unitary(), p.cutoff));
  const auto ce = channel_energy(ch, problem.model, levels, problem.penalty_weight, with_gradient);
  out.energy = ce.energy;
  out.penalty = ce.penalty;
  out.buffer_population = ce.buffer_population;
  if (with_gradient) out.gradient = prop.gradient(unitary_gradient(prop.unitary(), p.cutoff, ce.gradient));
  return out;
}

VqeResult run_vqe(const VqeProblem& problem) {
  problem.validate();
  const DeviceParams& p = problem.params;
  const double wmax = p.omega_max;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  VqeResult out;
  out.runs.resize(static_cast<std::size_t>(problem.batch));
  parallel_for(out.runs.size(), [&](std::size_t b) {
    VqeRun& run = out.runs[b];
    run.seed = problem.seed + b;
    const Waveform start = (b == 0 && problem.initial)
                               ? *problem.initial
                               : random_waveform(problem.n_ts, p.dt, problem.init_radius * wmax, run.seed);
    auto objective = [&](const RealVector& x, RealVector* grad) {
      try {
        const auto ev = evaluate_vqe(Waveform::from_params(x * wmax, p.dt), problem, grad != nullptr);
        if (grad) *grad = ev.gradient * wmax;
        return ev.objective();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonConvergence) throw;
        if (grad) grad->setZero(x.size());
        return kInf;
      }
    };
    opt::AdamConfig cfg;
    cfg.learning_rate = problem.learning_rate;
    cfg.max_iters = problem.max_iters;
    cfg.stall_tol = 1e-10;
    cfg.stall_window = problem.stall_window;
    const opt::Trace trace = opt::adam_minimize(objective, start.to_params() / wmax, cfg,
                                                [](RealVector& x) { project_unit_disc(x, {}); });
    run.iterations = trace.iterations;
    run.history = trace.history;
    run.waveform = Waveform::from_params(trace.best_x * wmax, p.dt);
    run.failed = !std::isfinite(trace.best_value);
    if (!run.failed) {
      const auto ev = evaluate_vqe(run.waveform, problem);
      run.energy = ev.energy;
      run.penalty = ev.penalty;
      run.objective = ev.objective();
    }
  });
  bool any = false;
  for (std::size_t b = 0; b < out.runs.size(); ++b) {
    if (out.runs[b].failed) continue;
    if (!any || out.runs[b].objective < out.runs[out.best_run].objective) out.best_run = b;
    any = true;
  }
  if (!any) fail(ErrorCode::AllRunsFailed, "every VQE run hit a non-mixing site map");
  const VqeRun& best = out.runs[out.best_run];
  out.best = best.waveform;
  out.energy = best.energy;
  out.penalty = best.penalty;
  out.buffer_population = best.penalty / problem.penalty_weight;
  return out;
}

VqeResult run_noisy_vqe(const VqeProblem& problem) {
  require(problem.noise.has_value(), ErrorCode::InvalidArgument, "noisy VQE needs a noise specification");
  return run_vqe(problem);
}

void to_json(nlohmann::json& j, const VqeRun& r) {
  j = nlohmann::json{{"seed", r.seed},         {"failed", r.failed},         {"energy", r.energy},
                     {"penalty", r.penalty},   {"objective", r.objective},   {"iterations", r.iterations}};
}

void to_json(nlohmann::json& j, const VqeResult& r) {
  j = nlohmann::json{{"energy", r.energy},
                     {"penalty", r.penalty},
                     {"buffer_population", r.buffer_population},
                     {"best_run", r.best_run},
                     {"runs", r.runs},
                     {"waveform", r.best}};
}

}  // namespace holoqed
