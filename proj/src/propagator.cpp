#include "holoqed/propagator.hpp"

#include <cmath>

#include "holoqed/errors.hpp"
#include "json.hpp"

namespace holoqed {

void Waveform::validate(double omega_max) const {
  require(!steps.empty(), ErrorCode::InvalidArgument, "waveform needs at least one step");
  require(dt > 0.0, ErrorCode::InvalidArgument, "waveform dt must be positive");
  const double bound = omega_max * (1.0 + 1e-12);
  for (const auto& s : steps)
    require(std::abs(s.cavity) <= bound && std::abs(s.qubit) <= bound, ErrorCode::AmplitudeBound,
            "waveform amplitude exceeds omega_max");
}

Waveform Waveform::zeros(std::size_t n_steps, double dt) {
  Waveform wf;
  wf.dt = dt;
  wf.steps.assign(n_steps, DriveStep{});
  return wf;
}

RealVector Waveform::to_params() const {
  RealVector p(n_params());
  for (std::size_t j = 0; j < steps.size(); ++j) {
    p(4 * j) = steps[j].cavity.real();
    p(4 * j + 1) = steps[j].cavity.imag();
    p(4 * j + 2) = steps[j].qubit.real();
    p(4 * j + 3) = steps[j].qubit.imag();
  }
  return p;
}

Waveform Waveform::from_params(const RealVector& p, double dt) {
  require(p.size() % 4 == 0, ErrorCode::LengthMismatch, "parameter count must be a multiple of 4");
  Waveform wf = zeros(static_cast<std::size_t>(p.size() / 4), dt);
  for (std::size_t j = 0; j < wf.steps.size(); ++j) {
    wf.steps[j].cavity = cplx(p(4 * j), p(4 * j + 1));
    wf.steps[j].qubit = cplx(p(4 * j + 2), p(4 * j + 3));
  }
  return wf;
}

void to_json(nlohmann::json& j, const Waveform& wf) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : wf.steps)
    steps.push_back({s.cavity.real(), s.cavity.imag(), s.qubit.real(), s.qubit.imag()});
  j = nlohmann::json{{"dt_ns", wf.dt}, {"steps", steps}};
}

void from_json(const nlohmann::json& j, Waveform& wf) {
  Waveform out;
  out.dt = j.at("dt_ns").get<double>();
  for (const auto& row : j.at("steps")) {
    require(row.size() == 4, ErrorCode::Schema, "waveform step needs 4 numbers");
    out.steps.push_back({cplx(row[0].get<double>(), row[1].get<double>()),
                         cplx(row[2].get<double>(), row[3].get<double>())});
  }
  wf = std::move(out);
}

namespace {

cplx masked(bool on, cplx v) { return on ? v : cplx(0.0); }

}  // namespace

Matrix propagate(const DeviceParams& params, const Waveform& wf, DriveChannels channels) {
  params.validate();
  wf.validate(params.omega_max);
  const CqedOperators ops(params);
  Matrix u = Matrix::Identity(params.dim(), params.dim());
  for (const auto& s : wf.steps) {
    const Matrix h = ops.hamiltonian(masked(channels.cavity, s.cavity), masked(channels.qubit, s.qubit));
    u = linalg::expm(-kI * wf.dt * h) * u;
  }
  return u;
}

StepwisePropagation::StepwisePropagation(const CqedOperators& ops, const Waveform& wf,
                                         DriveChannels channels)
    : ops_(&ops), channels_(channels) {
  wf.validate(ops.params().omega_max);
  const int n = ops.params().dim();
  steps_.reserve(wf.n_steps());
  unitary_ = Matrix::Identity(n, n);
  for (const auto& s : wf.steps) {
    steps_.emplace_back(
        ops.hamiltonian(masked(channels.cavity, s.cavity), masked(channels.qubit, s.qubit)), wf.dt);
    unitary_ = steps_.back().unitary() * unitary_;
  }
}

RealVector StepwisePropagation::gradient(const Matrix& g) const {
  const std::size_t n_steps = steps_.size();
  const Eigen::Index n = unitary_.rows();
  require(g.rows() == n && g.cols() == n, ErrorCode::DimensionMismatch,
          "functional has wrong dimension");
  // back[j] = G * U_N ... U_{j+2}: everything applied after step j+1.
  std::vector<Matrix> back(n_steps);
  back[n_steps - 1] = g;
  for (std::size_t j = n_steps - 1; j > 0; --j) back[j - 1] = back[j] * steps_[j].unitary();

  RealVector grad(static_cast<Eigen::Index>(4 * n_steps));
  Matrix before = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < n_steps; ++j) {
    // d tr(G U) = tr(Z dU_j) with Z = (U_{j-1}..U_1) G (U_N..U_{j+1}).
    grad.segment<4>(static_cast<Eigen::Index>(4 * j)) = step_gradient(j, before * back[j]);
    before = steps_[j].unitary() * before;
  }
  return grad;
}

Eigen::Vector4d StepwisePropagation::step_gradient(std::size_t j, const Matrix& z) const {
  const auto& st = steps_[j];
  const Matrix& v = st.eigenvectors();
  const Matrix weight = (v.adjoint() * z * v).transpose().cwiseProduct(st.kernel());
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  auto channel = [&](const Matrix& op, int offset) {
    const Matrix rotated = v.adjoint() * op * v;
    const cplx s1 = weight.cwiseProduct(rotated).sum();
    const cplx s2 = weight.cwiseProduct(rotated.adjoint()).sum();
    out(offset) = (s1 + s2).real();
    out(offset + 1) = (kI * (s1 - s2)).real();
  };
  if (channels_.cavity) channel(ops_->a(), 0);
  if (channels_.qubit) channel(ops_->sm(), 2);
  return out;
}

PropagationGradient propagate_with_gradient(const DeviceParams& params, const Waveform& wf,
                                            const Matrix& adjoint_target, DriveChannels channels) {
  params.validate();
  require(adjoint_target.rows() == params.dim() && adjoint_target.cols() == params.dim(),
          ErrorCode::DimensionMismatch, "target dimension must be 2 * cutoff");
  const CqedOperators ops(params);
  const StepwisePropagation prop(ops, wf, channels);
  PropagationGradient out;
  out.unitary = prop.unitary();
  const cplx z = (adjoint_target.adjoint() * out.unitary).trace();
  out.overlap = std::abs(z);
  // d|z| = Re(conj(z) dz) / |z|; at z = 0 the modulus is not differentiable, use zero.
  const cplx phase = out.overlap > 0 ? std::conj(z) / out.overlap : cplx(0.0);
  out.gradient = prop.gradient(phase * adjoint_target.adjoint());
  return out;
}

}  // namespace holoqed
