#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "holoqed/spin_chain.hpp"
#include "holoqed/types.hpp"

namespace holoqed {

/// Site tensor a[s](i, j) = <s, j| U |0, i>: i is the incoming bond (cavity
/// before the site), j the outgoing one. The Kraus operators of the site map
/// are K^s = a[s]^T.
struct MpsTensor {
  std::array<Matrix, 2> a;
  double leakage = 0.0;  // 1 - sum_s |A^s|_F^2 / D, nonzero only for truncated extraction

  int bond_dim() const { return static_cast<int>(a[0].rows()); }
  Matrix kraus(int s) const { return a[s].transpose(); }
  /// max |sum_s K^s^dagger K^s - I|: zero for a full-cutoff extraction.
  double isometry_residual() const;
};

MpsTensor extract_tensor(const Matrix& u, int bond_dim);

/// Row-major vectorised superoperators: vec(rho)[i*D + j] = rho(i, j).
/// `inserted[k]` carries the Pauli X, Y, Z (k = 0, 1, 2) insertion on the
/// emitted qubit: rho -> sum_{s,s'} O_{s's} K^s rho K^{s'}^dagger.
struct SiteChannel {
  int dim = 0;
  Matrix plain;
  std::array<Matrix, 3> inserted;

  const Matrix& with(char pauli) const;
};

SiteChannel site_channel(const MpsTensor& t);

/// Vector w with w . vec(X) = tr X.
Vector trace_functional(int dim);

struct FixedPointOptions {
  double tol = 1e-10;
  int cap_factor = 10;      // iteration cap = cap_factor * D^2
  bool direct_solve = true;  // past the cap, solve the stationarity equations directly
  double min_gap = 1e-10;    // eigenvalues within this of the unit circle count as peripheral
};

struct FixedPoint {
  Matrix rho;
  int iterations = 0;
};

/// Stationary state of the site map reached from the cavity vacuum.
/// Throws NonConvergence when neither the iteration nor the direct solve
/// yields a unique fixed point.
FixedPoint fixed_point(const SiteChannel& ch, const FixedPointOptions& opt = {});
Matrix transfer_channel_fixed_point(const MpsTensor& t);

double one_site(const SiteChannel& ch, const Matrix& rho, char a);
/// <a_0 b_r>: insertion, r-1 plain maps, insertion, trace.
double two_point(const SiteChannel& ch, const Matrix& rho, char a, char b, int r);
double energy_density(const SiteChannel& ch, const Matrix& rho, const SpinChainModel& model);

double energy_density(const MpsTensor& t, const SpinChainModel& model);
double correlation(const MpsTensor& t, char a, char b, int r);

/// Population of cavity levels [from, D) in rho.
double buffer_population(const Matrix& rho, int from);

/// Sequential-protocol trajectories: shots x sites outcome bits (0 = +1 eigenvalue).
/// `burn_in` unrecorded sites are generated first, in the z basis.
std::vector<std::vector<std::uint8_t>> sample_chain(const Matrix& u, const std::vector<char>& bases,
                                                    int shots, std::uint64_t seed,
                                                    int burn_in = 0);

}  // namespace holoqed
