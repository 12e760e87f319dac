#include "holoqed/noise.hpp"

#include "holoqed/errors.hpp"
#include "holoqed/linalg.hpp"
#include "holoqed/parallel.hpp"

namespace holoqed {

void NoiseSpec::validate() const {
  require(t1_cavity > 0 && t1_qubit > 0 && t2_qubit > 0, ErrorCode::InvalidArgument,
          "decoherence times must be positive");
  require(scale > 0 && std::isfinite(scale), ErrorCode::InvalidArgument, "noise scale must be positive");
}

void to_json(nlohmann::json& j, const NoiseSpec& n) {
  j = nlohmann::json{{"t1_cavity", n.t1_cavity * 1e-3},
                     {"t1_qubit", n.t1_qubit * 1e-3},
                     {"t2_qubit", n.t2_qubit * 1e-3},
                     {"scale", n.scale},
                     {"method", n.method == NoiseMethod::FirstOrder ? "first_order" : "exact_exponential"}};
}

void from_json(const nlohmann::json& j, NoiseSpec& n) {
  try {
    n = NoiseSpec{};
    if (j.contains("t1_cavity")) n.t1_cavity = j.at("t1_cavity").get<double>() * 1e3;
    if (j.contains("t1_qubit")) n.t1_qubit = j.at("t1_qubit").get<double>() * 1e3;
    if (j.contains("t2_qubit")) n.t2_qubit = j.at("t2_qubit").get<double>() * 1e3;
    if (j.contains("scale")) n.scale = j.at("scale").get<double>();
    if (j.contains("method")) {
      const auto m = j.at("method").get<std::string>();
      if (m == "first_order") n.method = NoiseMethod::FirstOrder;
      else if (m == "exact_exponential") n.method = NoiseMethod::ExactExponential;
      else fail(ErrorCode::Schema, "unknown noise method '" + m + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("noise: ") + e.what());
  }
  try {
    n.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Schema, e.what());
  }
}

Matrix dissipator(const Matrix& o, const Matrix& rho) {
  require(o.rows() == o.cols() && rho.rows() == rho.cols() && o.rows() == rho.rows(),
          ErrorCode::DimensionMismatch, "dissipator operands must be square and equal-sized");
  const Matrix od = o.adjoint() * o;
  return o * rho * o.adjoint() - 0.5 * (od * rho + rho * od);
}

Matrix dissipator_superop(const Matrix& o) {
  const Matrix od = o.adjoint() * o;
  const Matrix id = Matrix::Identity(o.rows(), o.cols());
  return linalg::kron(o, o.conjugate()) - 0.5 * linalg::kron(od, id) - 0.5 * linalg::kron(id, od.transpose());
}

DissipativeStep::DissipativeStep(const NoiseSpec& noise, int cutoff, double dt)
    : cutoff_(cutoff), exact_(noise.method == NoiseMethod::ExactExponential), dt_(dt) {
  noise.validate();
  const double s = noise.scale;
  const Matrix lc = dissipator_superop(ops::annihilation(cutoff)) / (s * noise.t1_cavity);
  const Matrix lq = dissipator_superop(ops::sigma_minus()) / (s * noise.t1_qubit) +
                    dissipator_superop(ops::pauli_z()) / (4.0 * s * noise.t2_qubit);
  if (exact_) {
    cavity_ = linalg::expm(dt * lc);
    qubit_ = linalg::expm(dt * lq);
  } else {
    cavity_ = lc;
    qubit_ = lq;
  }
}

Matrix DissipativeStep::map(const Matrix& x, bool transpose) const {
  const int c = cutoff_;
  const Matrix cav = transpose ? Matrix(cavity_.transpose()) : cavity_;
  const Matrix qub = transpose ? Matrix(qubit_.transpose()) : qubit_;
  // Cavity part on each block, through row-major vec.
  Matrix cav_part(2 * c, 2 * c);
  for (int q = 0; q < 2; ++q)
    for (int qp = 0; qp < 2; ++qp) {
      const Matrix blk = x.block(q * c, qp * c, c, c).transpose();
      const Eigen::Map<const Vector> v(blk.data(), c * c);
      const Vector w = cav * v;
      cav_part.block(q * c, qp * c, c, c) = Eigen::Map<const Matrix>(w.data(), c, c).transpose();
    }
  // Qubit part mixes whole blocks.
  auto mix = [&](const Matrix& in) {
    Matrix out = Matrix::Zero(2 * c, 2 * c);
    for (int q = 0; q < 2; ++q)
      for (int qp = 0; qp < 2; ++qp)
        for (int p = 0; p < 2; ++p)
          for (int pp = 0; pp < 2; ++pp) {
            const cplx w = qub(2 * q + qp, 2 * p + pp);
            if (w != cplx(0.0)) out.block(q * c, qp * c, c, c) += w * in.block(p * c, pp * c, c, c);
          }
    return out;
  };
  if (exact_) return mix(cav_part);  // the two factors commute
  return x + dt_ * (cav_part + mix(x));
}

Matrix DissipativeStep::apply(const Matrix& x) const { return map(x, false); }

Matrix DissipativeStep::apply_transpose(const Matrix& a) const { return map(a, true); }

namespace {

void check_positive(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-6)
    fail(ErrorCode::PositivityLoss, "density matrix lost positivity; reduce dt or use the exact method");
}

const std::array<Matrix, 4>& insertion_ops() {
  static const std::array<Matrix, 4> ops_ = {Matrix::Identity(2, 2), ops::pauli_x(), ops::pauli_y(),
                                             ops::pauli_z()};
  return ops_;
}

}  // namespace

Matrix noisy_step(const DeviceParams& params, const NoiseSpec& noise, const Matrix& h, const Matrix& rho) {
  params.validate();
  require(h.rows() == params.dim() && h.cols() == params.dim() && rho.rows() == params.dim() &&
              rho.cols() == params.dim(),
          ErrorCode::DimensionMismatch, "operators must be 2 * cutoff square");
  const Matrix u = linalg::HermitianExp(h, params.dt).unitary();
  const Matrix out = DissipativeStep(noise, params.cutoff, params.dt).apply(u * rho * u.adjoint());
  if (noise.method == NoiseMethod::FirstOrder) check_positive(out);
  return out;
}

NoisySuperchannel::NoisySuperchannel(const DeviceParams& params, const NoiseSpec& noise, const Waveform& wf,
                                     DriveChannels channels)
    : cutoff_(params.cutoff),
      ops_((params.validate(), wf.validate(params.omega_max), params)),
      prop_(ops_, wf, channels),
      dissipation_(noise, params.cutoff, wf.dt) {
  const int c = cutoff_;
  const int n = 2 * c;
  for (int i = 0; i < c; ++i)
    for (int j = i; j < c; ++j) inputs_.emplace_back(i, j);
  const std::size_t steps = prop_.n_steps();
  states_.assign(steps + 1, std::vector<Matrix>(inputs_.size()));
  parallel_for(inputs_.size(), [&](std::size_t k) {
    Matrix rho = Matrix::Zero(n, n);
    rho(inputs_[k].first, inputs_[k].second) = 1.0;  // qubit |0>, cavity |i><j|
    states_[0][k] = rho;
    for (std::size_t t = 0; t < steps; ++t) {
      const Matrix& u = prop_.step(t).unitary();
      rho = dissipation_.apply(u * rho * u.adjoint());
      states_[t + 1][k] = rho;
    }
  });
  if (noise.method == NoiseMethod::FirstOrder)
    for (std::size_t k = 0; k < inputs_.size(); ++k)
      if (inputs_[k].first == inputs_[k].second) check_positive(states_[steps][k]);

  channel_.dim = c;
  const auto& ins = insertion_ops();
  std::array<Matrix, 4> sup;
  for (auto& m : sup) m = Matrix::Zero(c * c, c * c);
  for (std::size_t k = 0; k < inputs_.size(); ++k) {
    const auto [i, j] = inputs_[k];
    const Matrix& x = states_[steps][k];
    for (int o = 0; o < 4; ++o) {
      Matrix out = Matrix::Zero(c, c);
      for (int q = 0; q < 2; ++q)
        for (int qp = 0; qp < 2; ++qp)
          if (ins[o](qp, q) != cplx(0.0)) out += ins[o](qp, q) * x.block(q * c, qp * c, c, c);
      // The (j, i) input maps to the adjoint output for Hermitian insertions.
      const Matrix adj = out.adjoint();
      for (int m = 0; m < c; ++m)
        for (int nn = 0; nn < c; ++nn) {
          sup[o](m * c + nn, i * c + j) = out(m, nn);
          if (i != j) sup[o](m * c + nn, j * c + i) = adj(m, nn);
        }
    }
  }
  channel_.plain = sup[0];
  for (int o = 0; o < 3; ++o) channel_.inserted[o] = sup[o + 1];
}

RealVector NoisySuperchannel::gradient(const std::array<Matrix, 4>& g) const {
  const int c = cutoff_;
  for (const auto& m : g)
    require(m.rows() == c * c && m.cols() == c * c, ErrorCode::DimensionMismatch,
            "channel gradient has wrong dimension");
  const auto& ins = insertion_ops();
  // Adjoint of the final joint state for input column (i, j).
  auto final_adjoint = [&](int i, int j) {
    Matrix a = Matrix::Zero(2 * c, 2 * c);
    for (int o = 0; o < 4; ++o)
      for (int q = 0; q < 2; ++q)
        for (int qp = 0; qp < 2; ++qp) {
          const cplx w = ins[o](qp, q);
          if (w == cplx(0.0)) continue;
          for (int m = 0; m < c; ++m)
            for (int nn = 0; nn < c; ++nn) a(q * c + m, qp * c + nn) += w * g[o](m * c + nn, i * c + j);
        }
    return a;
  };
  std::vector<Matrix> adj(inputs_.size());
  for (std::size_t k = 0; k < inputs_.size(); ++k) {
    const auto [i, j] = inputs_[k];
    adj[k] = final_adjoint(i, j);
    // Fold the (j, i) partner, whose state is the adjoint of this one.
    if (i != j) adj[k] += final_adjoint(j, i).adjoint();
  }
  const std::size_t steps = prop_.n_steps();
  RealVector grad(static_cast<Eigen::Index>(4 * steps));
  for (std::size_t t = steps; t-- > 0;) {
    const Matrix& u = prop_.step(t).unitary();
    const Matrix ud = u.adjoint();
    Matrix d = Matrix::Zero(2 * c, 2 * c);
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
      const Matrix b = dissipation_.apply_transpose(adj[k]);
      const Matrix& rho = states_[t][k];
      d += rho * ud * b.transpose() + rho.adjoint() * ud * b.conjugate();
      adj[k] = u.transpose() * b * u.conjugate();
    }
    grad.segment<4>(static_cast<Eigen::Index>(4 * t)) = prop_.step_gradient(t, d);
  }
  return grad;
}

SiteChannel noisy_site_superchannel(const DeviceParams& params, const NoiseSpec& noise, const Waveform& wf) {
  return NoisySuperchannel(params, noise, wf).channel();
}

}  // namespace holoqed
