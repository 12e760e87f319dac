#pragma once

#include <vector>

#include "holoqed/cqed.hpp"
#include "holoqed/linalg.hpp"

namespace holoqed {

struct DriveStep {
  cplx cavity{0.0};
  cplx qubit{0.0};
};

/// Piecewise-constant drive envelopes; step j lasts dt and is applied j-th.
struct Waveform {
  double dt = 10.0;
  std::vector<DriveStep> steps;

  std::size_t n_steps() const { return steps.size(); }
  double duration() const { return dt * static_cast<double>(steps.size()); }
  std::size_t n_params() const { return 4 * steps.size(); }

  /// Throws InvalidArgument (empty / bad dt) or AmplitudeBound.
  void validate(double omega_max) const;

  static Waveform zeros(std::size_t n_steps, double dt);

  /// Real parameter vector [Re c, Im c, Re q, Im q] per step.
  RealVector to_params() const;
  static Waveform from_params(const RealVector& p, double dt);
};

void to_json(nlohmann::json& j, const Waveform& wf);
void from_json(const nlohmann::json& j, Waveform& wf);

/// Which drive channels enter the Hamiltonian. A disabled channel
/// contributes neither to the dynamics nor to the gradient.
struct DriveChannels {
  bool cavity = true;
  bool qubit = true;
};

/// Ordered product of per-step exponentials; step 1 is the rightmost factor.
Matrix propagate(const DeviceParams& params, const Waveform& wf, DriveChannels channels = {});

/// Forward pass that keeps every step's eigensystem so gradients of any
/// linear functional Re tr(G U) follow from one extra backward sweep.
class StepwisePropagation {
 public:
  StepwisePropagation(const CqedOperators& ops, const Waveform& wf, DriveChannels channels = {});

  const Matrix& unitary() const { return unitary_; }
  const linalg::HermitianExp& step(std::size_t j) const { return steps_[j]; }
  std::size_t n_steps() const { return steps_.size(); }

  /// d/dp Re tr(G U) for every real drive parameter p (4 per step).
  RealVector gradient(const Matrix& g) const;
  /// d/dp Re tr(Z U_j) for the four drive parameters of step j alone.
  Eigen::Vector4d step_gradient(std::size_t j, const Matrix& z) const;

 private:
  const CqedOperators* ops_;
  DriveChannels channels_;
  std::vector<linalg::HermitianExp> steps_;
  Matrix unitary_;
};

struct PropagationGradient {
  Matrix unitary;
  double overlap = 0.0;  // |tr(target^dagger U)|
  RealVector gradient;   // d overlap / dp, length 4 N_ts
};

PropagationGradient propagate_with_gradient(const DeviceParams& params, const Waveform& wf,
                                            const Matrix& adjoint_target,
                                            DriveChannels channels = {});

}  // namespace holoqed
