#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "holoqed/qmps.hpp"
#include "holoqed/spin_chain.hpp"

namespace holoqed {

enum class Boundary { Open, Periodic };

struct GroundState {
  double energy = 0.0;
  RealVector state;  // bit i of the basis index is spin i, 0 meaning z = +1
};

GroundState exact_ground_state(const SpinChainModel& model, int l, Boundary boundary);

struct DmrgConfig {
  int chain_length = 128;
  int bond_dim = 16;
  double sweep_tol = 1e-9;
  int max_sweeps = 40;
  std::uint64_t seed = 7;

  void validate() const;
};

/// Real open-boundary MPS; site k holds B[s] of shape (left bond, right bond).
struct FiniteMps {
  std::vector<std::array<RealMatrix, 2>> sites;

  int length() const { return static_cast<int>(sites.size()); }
  /// <psi| prod_k P_k |psi> / <psi|psi> for Pauli labels on distinct sites.
  double expectation(const std::vector<std::pair<int, char>>& ops) const;
};

struct DmrgResult {
  double energy = 0.0;
  double bulk_energy = 0.0;  // local energy density averaged over the two central sites
  std::vector<double> sweep_energies;
  double truncation_error = 0.0;  // largest discarded weight in the last sweep
  FiniteMps mps;                  // right-canonical: every site but the first
};

DmrgResult dmrg_ground_state(const SpinChainModel& model, const DmrgConfig& cfg);

double local_energy(const FiniteMps& mps, const SpinChainModel& model, int site);

/// <a_i b_{i+r}> averaged over the sites i of the central half of the chain.
double central_correlation(const FiniteMps& mps, char a, char b, int r);

/// Translation-invariant site tensor from the chain centre, in the Schmidt
/// gauge with sign/orthogonal gauge aligned between neighbouring bonds, kept
/// on the `bond_dim` largest Schmidt states and re-isometrised.
struct BulkTensor {
  MpsTensor tensor;
  double gauge_mismatch = 0.0;  // |B_{c+1} - P B_c Q| after alignment
  RealVector schmidt;           // Schmidt values at the central bond
};

BulkTensor bulk_tensor(const FiniteMps& mps, int bond_dim);

struct TargetUnitary {
  Matrix matrix;         // 2 m_c x 2 m_c, qubit-major
  int logical_dim = 0;   // m_b
  int cutoff = 0;        // m_c
};

TargetUnitary embed_isometry(const MpsTensor& t, int cutoff);

void to_json(nlohmann::json& j, const TargetUnitary& t);
void from_json(const nlohmann::json& j, TargetUnitary& t);
void to_json(nlohmann::json& j, const MpsTensor& t);
void from_json(const nlohmann::json& j, MpsTensor& t);

}  // namespace holoqed
