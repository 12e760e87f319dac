#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holoqed/errors.hpp"
#include "holoqed/propagator.hpp"

namespace holoqed {

/// |tr(target^dagger u)| / dim. Both arguments must have the same dimension.
double trace_fidelity(const Matrix& u, const Matrix& target);

/// Embeds a qubit-major target on 2m cavity levels into the 2*cutoff space,
/// zero outside the first m levels of each qubit block.
Matrix pad_target(const Matrix& target, int cutoff);

/// Fidelity of u (2*cutoff) against a target living on the lowest
/// target.rows()/2 cavity levels, normalised by the target dimension.
double subspace_fidelity(const Matrix& u, const Matrix& target);

struct SynthesisProblem {
  Matrix target;  // dimension 2*cutoff, or 2m with m < cutoff for a subspace target
  DeviceParams params;
  std::size_t n_ts = 100;
  std::uint64_t seed = 1;
  int max_iters = 3000;
  double tol_infidelity = 1e-6;
  double learning_rate = 0.02;  // in units of omega_max
  double init_radius = 0.1;     // in units of omega_max
  DriveChannels channels;
  std::optional<Waveform> initial;

  void validate() const;
};

struct SynthesisResult {
  Waveform waveform;
  std::vector<double> fidelity_history;
  double infidelity = 1.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

/// Thrown when a run stops improving before reaching tolerance. Carries the
/// best waveform found so callers can keep it while restarting elsewhere.
class NoProgressError : public Error {
 public:
  explicit NoProgressError(SynthesisResult partial)
      : Error(ErrorCode::NoProgress, "fidelity stalled before reaching tolerance"),
        partial_(std::move(partial)) {}
  const SynthesisResult& partial() const { return partial_; }

 private:
  SynthesisResult partial_;
};

/// Clips each complex amplitude of a parameter vector in units of omega_max
/// to the unit disc; disabled channels are pinned to zero.
void project_unit_disc(RealVector& x, DriveChannels ch);

Waveform random_waveform(std::size_t n_ts, double dt, double radius, std::uint64_t seed);

SynthesisResult synthesize(const SynthesisProblem& problem);

/// `restarts` independent runs with seeds seed, seed+1, ...; stalled runs
/// contribute their best point. Lowest infidelity wins, ties by lowest seed.
SynthesisResult synthesize_restarts(const SynthesisProblem& problem, int restarts);

void to_json(nlohmann::json& j, const SynthesisResult& r);

}  // namespace holoqed
