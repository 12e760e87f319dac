#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "holoqed/cqed.hpp"
#include "holoqed/noise.hpp"
#include "holoqed/propagator.hpp"
#include "holoqed/qmps.hpp"
#include "holoqed/spin_chain.hpp"

namespace holoqed {

struct VqeProblem {
  SpinChainModel model;
  DeviceParams params;
  std::size_t n_ts = 200;
  int bond_levels = 0;          // usable levels; 0 means cutoff - 6
  double penalty_weight = 10.0;
  int batch = 50;
  std::uint64_t seed = 1;
  std::optional<NoiseSpec> noise;
  int max_iters = 3000;
  double learning_rate = 0.005;  // in units of omega_max
  int stall_window = 200;        // iterations without improvement before a run stops
  double init_radius = 0.1;     // in units of omega_max
  std::optional<Waveform> initial;  // warm start for batch member 0

  int usable_levels() const { return bond_levels > 0 ? bond_levels : params.cutoff - 6; }
  void validate() const;
};

/// Energy density and penalty of the site map, with the bilinear gradient
/// d/dT_k Re(...) for T_k in (plain, X, Y, Z) when requested.
struct ChannelEnergy {
  double energy = 0.0;
  double penalty = 0.0;        // weight * buffer population
  double buffer_population = 0.0;
  Matrix rho;                  // stationary bond state
  std::array<Matrix, 4> gradient;
};

ChannelEnergy channel_energy(const SiteChannel& ch, const SpinChainModel& model, int bond_levels,
                             double penalty_weight, bool with_gradient);

struct VqeEvaluation {
  double energy = 0.0;
  double penalty = 0.0;
  double buffer_population = 0.0;
  RealVector gradient;  // d(energy + penalty)/d waveform parameters, when requested

  double objective() const { return energy + penalty; }
};

/// Ideal or noisy (when problem.noise is set) objective of one waveform.
VqeEvaluation evaluate_vqe(const Waveform& wf, const VqeProblem& problem, bool with_gradient = false);

struct VqeRun {
  std::uint64_t seed = 0;
  bool failed = false;
  double energy = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> history;  // objective per iteration
  Waveform waveform;
};

struct VqeResult {
  Waveform best;
  double energy = 0.0;
  double penalty = 0.0;
  double buffer_population = 0.0;
  std::size_t best_run = 0;
  std::vector<VqeRun> runs;
};

/// Batch of projected-Adam runs from seeds seed, seed+1, ...; the lowest
/// objective wins, ties by lowest seed. Runs whose objective cannot be
/// evaluated (non-mixing site map) are marked failed.
VqeResult run_vqe(const VqeProblem& problem);
/// Same loop through the noisy site superchannel; problem.noise must be set.
VqeResult run_noisy_vqe(const VqeProblem& problem);

/// 1 - E / E0.
inline double relative_energy_error(double energy, double reference) { return 1.0 - energy / reference; }

void to_json(nlohmann::json& j, const VqeRun& r);
void to_json(nlohmann::json& j, const VqeResult& r);

}  // namespace holoqed
