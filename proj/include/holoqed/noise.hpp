#pragma once

#include <array>
#include <vector>

#include "json.hpp"
#include "holoqed/cqed.hpp"
#include "holoqed/propagator.hpp"
#include "holoqed/qmps.hpp"

namespace holoqed {

enum class NoiseMethod { FirstOrder, ExactExponential };

/// Decoherence times in ns; `scale` multiplies all three.
struct NoiseSpec {
  double t1_cavity = 2'700'000.0;
  double t1_qubit = 170'000.0;
  double t2_qubit = 43'000.0;
  double scale = 1.0;
  NoiseMethod method = NoiseMethod::ExactExponential;

  void validate() const;
};

/// JSON times are in microseconds.
void to_json(nlohmann::json& j, const NoiseSpec& n);
void from_json(const nlohmann::json& j, NoiseSpec& n);

/// D[O] rho = O rho O^dagger - {O^dagger O, rho} / 2.
Matrix dissipator(const Matrix& o, const Matrix& rho);

/// Row-major superoperator of D[O]: vec(D[O] X) = S vec(X).
Matrix dissipator_superop(const Matrix& o);

/// Dissipative part of one time step on the joint space, kept factorised into
/// a cavity superoperator (applied to every qubit block) and a 4x4 qubit
/// superoperator (mixing the blocks). FirstOrder is 1 + dt L taken literally;
/// ExactExponential is exp(dt L).
class DissipativeStep {
 public:
  DissipativeStep(const NoiseSpec& noise, int cutoff, double dt);

  Matrix apply(const Matrix& x) const;
  /// Bilinear adjoint: sum(A o apply(X)) = sum(apply_transpose(A) o X).
  Matrix apply_transpose(const Matrix& a) const;

 private:
  Matrix map(const Matrix& x, bool transpose) const;

  int cutoff_;
  bool exact_;
  double dt_;
  Matrix cavity_;  // superoperator (exact) or generator (first order)
  Matrix qubit_;
};

/// rho -> E(U rho U^dagger) with U = exp(-i h dt).
/// Throws PositivityLoss when the result has an eigenvalue below -1e-6.
Matrix noisy_step(const DeviceParams& params, const NoiseSpec& noise, const Matrix& h, const Matrix& rho);

/// Noisy site map on cavity density matrices: N_ts noisy steps on the joint
/// space from qubit |0>, an optional Pauli insertion on the qubit, and a
/// partial trace over the qubit.
class NoisySuperchannel {
 public:
  NoisySuperchannel(const DeviceParams& params, const NoiseSpec& noise, const Waveform& wf,
                    DriveChannels channels = {});
  NoisySuperchannel(const NoisySuperchannel&) = delete;
  NoisySuperchannel& operator=(const NoisySuperchannel&) = delete;

  const SiteChannel& channel() const { return channel_; }

  /// Gradient of Re sum_{ab} G_k(a,b) T_k(a,b) over the plain, X, Y and Z
  /// channels (k = 0..3), per drive parameter.
  RealVector gradient(const std::array<Matrix, 4>& g) const;

 private:
  int cutoff_;
  CqedOperators ops_;
  StepwisePropagation prop_;
  DissipativeStep dissipation_;
  // states_[t][k]: joint state after t steps for input pair k = (i <= j).
  std::vector<std::vector<Matrix>> states_;
  std::vector<std::pair<int, int>> inputs_;
  SiteChannel channel_;
};

SiteChannel noisy_site_superchannel(const DeviceParams& params, const NoiseSpec& noise, const Waveform& wf);

}  // namespace holoqed
