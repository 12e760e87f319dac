#include "holoqed/snap.hpp"

#include <random>

#include "holoqed/cqed.hpp"
#include "holoqed/errors.hpp"
#include "holoqed/grape.hpp"
#include "holoqed/linalg.hpp"
#include "holoqed/optimize.hpp"
#include "holoqed/parallel.hpp"

namespace holoqed {

namespace {

constexpr int kFixedPerLayer = 5;

Matrix cavity_displacement(cplx alpha, int cutoff) {
  if (alpha == cplx(0.0, 0.0)) return Matrix::Identity(cutoff, cutoff);
  const Matrix a = ops::annihilation(cutoff);
  // exp(G) with G anti-Hermitian equals exp(-i H) for H = i G.
  const Matrix h = kI * (alpha * a - std::conj(alpha) * a.adjoint());
  return linalg::HermitianExp(h, 1.0).unitary();
}

Matrix qubit_rotation(const std::array<double, 3>& phi) {
  const double n = std::sqrt(phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2]);
  Matrix r = Matrix::Identity(2, 2) * std::cos(n);
  if (n == 0.0) return r;
  const double s = std::sin(n) / n;
  const Matrix g = phi[0] * ops::pauli_x() + phi[1] * ops::pauli_y() + phi[2] * ops::pauli_z();
  r -= kI * s * g;
  return r;
}

// D R S assembled block by block: block (q, q') = Dc * R(q, q') * diag(s_{q'}).
Matrix assemble_layer(const Matrix& dc, const Matrix& r, const RealVector& theta) {
  const int c = static_cast<int>(theta.size());
  Matrix out(2 * c, 2 * c);
  for (int qp = 0; qp < 2; ++qp) {
    const double sign = qp == 0 ? 1.0 : -1.0;
    Matrix scaled = dc;
    for (int n = 0; n < c; ++n) scaled.col(n) *= std::polar(1.0, sign * theta(n));
    for (int q = 0; q < 2; ++q) out.block(q * c, qp * c, c, c) = r(q, qp) * scaled;
  }
  return out;
}

struct LayerView {
  cplx alpha;
  std::array<double, 3> phi;
  RealVector theta;
};

LayerView view(const RealVector& p, int k, int cutoff) {
  const int stride = kFixedPerLayer + cutoff;
  const int o = k * stride;
  return {{p(o), p(o + 1)}, {p(o + 2), p(o + 3), p(o + 4)}, p.segment(o + kFixedPerLayer, cutoff)};
}

Matrix layer_from(const LayerView& v, int cutoff) {
  return assemble_layer(cavity_displacement(v.alpha, cutoff), qubit_rotation(v.phi), v.theta);
}

// Infidelity 1 - |tr(T^dagger U)| / norm with central-difference gradients.
// Each layer k sees the fixed environment M_k = Pre_k T^dagger Suf_k, so a
// perturbed layer costs one layer rebuild and one trace.
class CircuitObjective {
 public:
  CircuitObjective(const Matrix& padded, double norm, int cutoff, double step)
      : td_(padded.adjoint()), norm_(norm), cutoff_(cutoff), step_(step) {}

  double operator()(const RealVector& p, RealVector* grad) const {
    const int stride = kFixedPerLayer + cutoff_;
    const int depth = static_cast<int>(p.size()) / stride;
    const int dim = 2 * cutoff_;
    std::vector<Matrix> layers(depth);
    for (int k = 0; k < depth; ++k) layers[k] = layer_from(view(p, k, cutoff_), cutoff_);
    std::vector<Matrix> pre(depth + 1);
    pre[0] = Matrix::Identity(dim, dim);
    for (int k = 0; k < depth; ++k) pre[k + 1] = layers[k] * pre[k];
    const double value = 1.0 - std::abs((td_ * pre[depth]).trace()) / norm_;
    if (!grad) return value;

    grad->resize(p.size());
    Matrix suf = Matrix::Identity(dim, dim);
    for (int k = depth - 1; k >= 0; --k) {
      const Matrix env = pre[k] * td_ * suf;
      auto eval = [&](const Matrix& layer) {
        return 1.0 - std::abs(env.cwiseProduct(layer.transpose()).sum()) / norm_;
      };
      LayerView v = view(p, k, cutoff_);
      const Matrix r = qubit_rotation(v.phi);
      const Matrix dc = cavity_displacement(v.alpha, cutoff_);
      const int o = k * stride;
      for (int j = 0; j < stride; ++j) {
        double f[2];
        for (int side = 0; side < 2; ++side) {
          LayerView w = v;
          const double h = side == 0 ? step_ : -step_;
          if (j < 2) {
            w.alpha += j == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            f[side] = eval(assemble_layer(cavity_displacement(w.alpha, cutoff_), r, w.theta));
          } else if (j < kFixedPerLayer) {
            w.phi[j - 2] += h;
            f[side] = eval(assemble_layer(dc, qubit_rotation(w.phi), w.theta));
          } else {
            w.theta(j - kFixedPerLayer) += h;
            f[side] = eval(assemble_layer(dc, r, w.theta));
          }
        }
        (*grad)(o + j) = (f[0] - f[1]) / (2.0 * step_);
      }
      suf = suf * layers[k];
    }
    return value;
  }

 private:
  Matrix td_;
  double norm_;
  int cutoff_;
  double step_;
};

RealVector random_layer(int cutoff, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  RealVector p(kFixedPerLayer + cutoff);
  p(0) = g(rng);
  p(1) = g(rng);
  for (int j = 2; j < p.size(); ++j) p(j) = u(rng) * (j < kFixedPerLayer ? 0.5 : 1.0);
  return p;
}

}  // namespace

Matrix gate_displacement(cplx alpha, int cutoff) {
  require(cutoff >= 2, ErrorCode::InvalidArgument, "cutoff must be at least 2");
  return ops::on_cavity(cavity_displacement(alpha, cutoff));
}

Matrix gate_snap(const RealVector& theta) {
  require(theta.size() >= 1, ErrorCode::LengthMismatch, "SNAP needs one phase per level");
  return assemble_layer(Matrix::Identity(theta.size(), theta.size()), Matrix::Identity(2, 2), theta);
}

Matrix gate_rotation(const std::array<double, 3>& phi, int cutoff) {
  require(cutoff >= 1, ErrorCode::InvalidArgument, "cutoff must be positive");
  return ops::on_qubit(qubit_rotation(phi), cutoff);
}

Matrix SnapLayer::unitary() const {
  const int c = static_cast<int>(theta.size());
  return assemble_layer(cavity_displacement(alpha, c), qubit_rotation(phi), theta);
}

int GateCircuit::cutoff() const { return layers.empty() ? 0 : static_cast<int>(layers.front().theta.size()); }

void GateCircuit::validate() const {
  require(!layers.empty(), ErrorCode::InvalidArgument, "circuit has no layers");
  require(layer_time > 0.0 && std::isfinite(layer_time), ErrorCode::InvalidArgument, "layer_time must be positive");
  const int c = cutoff();
  require(c >= 2, ErrorCode::InvalidArgument, "cutoff must be at least 2");
  for (const auto& l : layers) {
    require(l.theta.size() == c, ErrorCode::LengthMismatch, "SNAP phase count differs between layers");
    bool finite = std::isfinite(l.alpha.real()) && std::isfinite(l.alpha.imag()) && l.theta.allFinite();
    for (double x : l.phi) finite = finite && std::isfinite(x);
    require(finite, ErrorCode::InvalidArgument, "non-finite gate parameter");
  }
}

Matrix GateCircuit::unitary() const {
  validate();
  Matrix u = Matrix::Identity(2 * cutoff(), 2 * cutoff());
  for (const auto& l : layers) u = l.unitary() * u;
  return u;
}

RealVector GateCircuit::parameters() const {
  const int stride = kFixedPerLayer + cutoff();
  RealVector p(depth() * stride);
  for (int k = 0; k < depth(); ++k) {
    const auto& l = layers[k];
    p.segment(k * stride, kFixedPerLayer) << l.alpha.real(), l.alpha.imag(), l.phi[0], l.phi[1], l.phi[2];
    p.segment(k * stride + kFixedPerLayer, cutoff()) = l.theta;
  }
  return p;
}

GateCircuit GateCircuit::from_parameters(const RealVector& p, int cutoff, double layer_time) {
  const int stride = kFixedPerLayer + cutoff;
  require(cutoff >= 2 && p.size() % stride == 0, ErrorCode::LengthMismatch, "parameter count does not match cutoff");
  GateCircuit c;
  c.layer_time = layer_time;
  for (int k = 0; k < p.size() / stride; ++k) {
    const LayerView v = view(p, k, cutoff);
    c.layers.push_back({v.alpha, v.phi, v.theta});
  }
  return c;
}

double circuit_infidelity(const GateCircuit& c, const Matrix& target) {
  const Matrix u = c.unitary();
  return 1.0 - (target.rows() == u.rows() ? trace_fidelity(u, target) : subspace_fidelity(u, target));
}

void CircuitProblem::validate() const {
  require(cutoff >= 2, ErrorCode::InvalidArgument, "cutoff must be at least 2");
  require(depth >= 1, ErrorCode::InvalidArgument, "depth must be at least 1");
  require(batch >= 1 && max_iters >= 0 && layer_noise >= 0.0 && fd_step > 0.0 && layer_time > 0.0,
          ErrorCode::InvalidArgument, "bad optimiser settings");
  require(target.rows() == target.cols() && target.rows() % 2 == 0 && target.rows() <= 2 * cutoff,
          ErrorCode::DimensionMismatch, "target must be 2m x 2m with m <= cutoff");
  require(unitarity_residual(target) < 1e-10, ErrorCode::InvalidArgument, "target is not unitary");
}

CircuitResult synthesize_circuit(const CircuitProblem& problem) {
  problem.validate();
  const int c = problem.cutoff;
  const int stride = kFixedPerLayer + c;
  const CircuitObjective objective(pad_target(problem.target, c), static_cast<double>(problem.target.rows()), c,
                                   problem.fd_step);
  opt::LbfgsConfig cfg;
  cfg.max_iters = problem.max_iters;
  cfg.target = problem.tol_infidelity;
  cfg.grad_tol = 1e-12;
  const opt::Objective f = [&](const RealVector& x, RealVector* g) { return objective(x, g); };

  CircuitResult out;
  RealVector incumbent;
  for (int depth = 1; depth <= problem.depth; ++depth) {
    std::vector<opt::Trace> traces(problem.batch);
    parallel_for(problem.batch, [&](std::size_t b) {
      std::seed_seq seq{problem.seed, static_cast<std::uint64_t>(depth), static_cast<std::uint64_t>(b)};
      std::mt19937_64 rng(seq);
      RealVector x0(depth * stride);
      if (depth > 1) x0.head(incumbent.size()) = incumbent;
      RealVector fresh = RealVector::Zero(stride);
      if (b > 0) {
        if (depth == 1) {
          fresh = random_layer(c, rng);
        } else {
          std::normal_distribution<double> g(0.0, problem.layer_noise);
          for (int j = 0; j < stride; ++j) fresh(j) = g(rng);
        }
      }
      x0.tail(stride) = fresh;
      traces[b] = opt::lbfgs_minimize(f, x0, cfg);
    });
    std::size_t best = 0;
    for (std::size_t b = 1; b < traces.size(); ++b)
      if (traces[b].best_value < traces[best].best_value) best = b;
    incumbent = traces[best].best_x;
    for (double v : traces[best].history) out.fidelity_history.push_back(1.0 - v);
    out.depth_infidelity.push_back(traces[best].best_value);
    if (traces[best].best_value <= problem.tol_infidelity) break;
  }
  out.circuit = GateCircuit::from_parameters(incumbent, c, problem.layer_time);
  out.infidelity = circuit_infidelity(out.circuit, problem.target);
  out.converged = out.infidelity <= problem.tol_infidelity;
  return out;
}

void to_json(nlohmann::json& j, const GateCircuit& c) {
  j = nlohmann::json{{"layer_time_ns", c.layer_time}, {"layers", nlohmann::json::array()}};
  for (const auto& l : c.layers) {
    j["layers"].push_back({{"alpha", {l.alpha.real(), l.alpha.imag()}},
                           {"phi", {l.phi[0], l.phi[1], l.phi[2]}},
                           {"theta", std::vector<double>(l.theta.data(), l.theta.data() + l.theta.size())}});
  }
}

void from_json(const nlohmann::json& j, GateCircuit& c) {
  try {
    c = GateCircuit{};
    c.layer_time = j.value("layer_time_ns", 800.0);
    for (const auto& l : j.at("layers")) {
      SnapLayer layer;
      const auto a = l.at("alpha").get<std::vector<double>>();
      require(a.size() == 2, ErrorCode::Schema, "alpha must be [re, im]");
      layer.alpha = {a[0], a[1]};
      const auto phi = l.at("phi").get<std::vector<double>>();
      require(phi.size() == 3, ErrorCode::Schema, "phi must have three components");
      layer.phi = {phi[0], phi[1], phi[2]};
      const auto theta = l.at("theta").get<std::vector<double>>();
      layer.theta = Eigen::Map<const RealVector>(theta.data(), static_cast<Eigen::Index>(theta.size()));
      c.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("gate circuit: ") + e.what());
  }
  c.validate();
}

void to_json(nlohmann::json& j, const CircuitResult& r) {
  j = nlohmann::json{{"depth", r.circuit.depth()},
                     {"implementation_time_ns", r.circuit.implementation_time()},
                     {"final_infidelity", r.infidelity},
                     {"converged", r.converged},
                     {"depth_infidelity", r.depth_infidelity},
                     {"circuit", r.circuit}};
}

}  // namespace holoqed
