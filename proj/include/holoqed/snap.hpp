#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "holoqed/types.hpp"

namespace holoqed {

/// D(alpha) = exp(alpha a - alpha* a^dagger) on the cavity, identity on the qubit.
Matrix gate_displacement(cplx alpha, int cutoff);
/// diag(e^{+i theta_n}) on the q=0 block and diag(e^{-i theta_n}) on q=1.
Matrix gate_snap(const RealVector& theta);
/// exp(-i phi . sigma) on the qubit, identity on the cavity.
Matrix gate_rotation(const std::array<double, 3>& phi, int cutoff);

struct SnapLayer {
  cplx alpha{0.0, 0.0};
  std::array<double, 3> phi{0.0, 0.0, 0.0};
  RealVector theta;  // one phase per cavity level

  /// D(alpha) R(phi) S(theta): the SNAP acts first.
  Matrix unitary() const;
};

struct GateCircuit {
  std::vector<SnapLayer> layers;
  double layer_time = 800.0;  // ns

  int cutoff() const;
  int depth() const { return static_cast<int>(layers.size()); }
  double implementation_time() const { return depth() * layer_time; }
  /// L_d ... L_1, layer 1 applied first.
  Matrix unitary() const;
  void validate() const;

  /// Flat parameters, per layer [Re alpha, Im alpha, phi_x, phi_y, phi_z, theta...].
  RealVector parameters() const;
  static GateCircuit from_parameters(const RealVector& p, int cutoff, double layer_time = 800.0);
};

struct CircuitProblem {
  Matrix target;  // 2*cutoff, or a 2m subspace target with m < cutoff
  int cutoff = 4;
  int depth = 1;
  std::uint64_t seed = 1;
  int max_iters = 200;          // L-BFGS iterations per batch member
  int batch = 10;
  double layer_noise = 0.05;    // std of the parameters of each new layer
  double tol_infidelity = 1e-10;
  double layer_time = 800.0;
  double fd_step = 1e-6;

  void validate() const;
};

struct CircuitResult {
  GateCircuit circuit;
  std::vector<double> fidelity_history;  // winning member's trace, depth by depth
  std::vector<double> depth_infidelity;  // best infidelity after each depth
  double infidelity = 1.0;
  bool converged = false;
};

double circuit_infidelity(const GateCircuit& c, const Matrix& target);

/// Batch-sequential synthesis: a batch of depth-1 circuits, then repeated
/// extension of the incumbent by a near-identity layer (member 0 uses an
/// exact identity layer) with full re-optimisation. Stops early once the
/// tolerance is met.
CircuitResult synthesize_circuit(const CircuitProblem& problem);

void to_json(nlohmann::json& j, const GateCircuit& c);
void from_json(const nlohmann::json& j, GateCircuit& c);
void to_json(nlohmann::json& j, const CircuitResult& r);

}  // namespace holoqed
