#pragma once

#include "json.hpp"

#include "holoqed/types.hpp"

namespace holoqed {

/// Physical constants of the transmon + cavity device. Frequencies are
/// angular (rad/ns), times are ns. Defaults are the published device values.
struct DeviceParams {
  double chi = -kTwoPi * 2194e-6;
  double chi_prime = -kTwoPi * 19e-6;
  double kerr = -kTwoPi * 3.7e-6;
  double omega_max = kTwoPi * 10e-3;
  double dt = 10.0;
  double t1_cavity = 2'700'000.0;
  double t1_qubit = 170'000.0;
  double t2_qubit = 43'000.0;
  int cutoff = 8;

  int dim() const { return 2 * cutoff; }
  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

void to_json(nlohmann::json& j, const DeviceParams& p);
void from_json(const nlohmann::json& j, DeviceParams& p);

/// kHz (linear) <-> rad/ns.
inline double khz_to_angular(double khz) { return kTwoPi * khz * 1e-6; }
inline double angular_to_khz(double w) { return w / (kTwoPi * 1e-6); }

namespace ops {

// Joint basis index is q * cutoff + n; qubit |0> is the ground/reset state.
inline Eigen::Index index(int q, int n, int cutoff) { return static_cast<Eigen::Index>(q) * cutoff + n; }

Matrix annihilation(int cutoff);            // cavity-only a
Matrix on_cavity(const Matrix& m);          // I_2 (x) m
Matrix on_qubit(const Matrix& m, int cutoff);  // m (x) I_cutoff

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix sigma_minus();  // |0><1|
Matrix sigma_plus();

Matrix a(int cutoff);
Matrix number(int cutoff);
Matrix sx(int cutoff);
Matrix sy(int cutoff);
Matrix sz(int cutoff);
Matrix sm(int cutoff);
Matrix sp(int cutoff);

}  // namespace ops

/// H1 = K/2 a+a+aa + chi/2 n sz + chi'/2 a+a+aa sz in the rotating frame of H0.
Matrix build_static_hamiltonian(const DeviceParams& params);

/// Omega_c a + Omega_q sm + h.c.; throws AmplitudeBound above omega_max.
Matrix build_drive_hamiltonian(const DeviceParams& params, cplx omega_c, cplx omega_q);

/// Cached operator set for repeated Hamiltonian assembly.
class CqedOperators {
 public:
  explicit CqedOperators(const DeviceParams& params);

  const DeviceParams& params() const { return params_; }
  const Matrix& static_hamiltonian() const { return h_static_; }
  const Matrix& a() const { return a_; }
  const Matrix& sm() const { return sm_; }

  /// H1 + H_drive without the amplitude-bound check.
  Matrix hamiltonian(cplx omega_c, cplx omega_q) const;

 private:
  DeviceParams params_;
  Matrix h_static_;
  Matrix a_;
  Matrix sm_;
};

}  // namespace holoqed
