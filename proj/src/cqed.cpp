#include "holoqed/cqed.hpp"

#include <cmath>
#include "json.hpp"

#include "holoqed/errors.hpp"

namespace holoqed {

void DeviceParams::validate() const {
  require(cutoff >= 2, ErrorCode::InvalidArgument, "cutoff must be >= 2");
  require(dt > 0.0, ErrorCode::InvalidArgument, "dt must be positive");
  require(omega_max > 0.0, ErrorCode::InvalidArgument, "omega_max must be positive");
  require(t1_cavity > 0.0 && t1_qubit > 0.0 && t2_qubit > 0.0, ErrorCode::InvalidArgument,
          "relaxation times must be positive");
  require(std::isfinite(chi) && std::isfinite(chi_prime) && std::isfinite(kerr),
          ErrorCode::InvalidArgument, "non-finite frequency");
}

// File units: frequencies in linear kHz, times in ns.
void to_json(nlohmann::json& j, const DeviceParams& p) {
  j = nlohmann::json{{"chi", angular_to_khz(p.chi)},
                     {"chi_prime", angular_to_khz(p.chi_prime)},
                     {"kerr", angular_to_khz(p.kerr)},
                     {"omega_max", angular_to_khz(p.omega_max)},
                     {"dt", p.dt},
                     {"t1_cavity", p.t1_cavity},
                     {"t1_qubit", p.t1_qubit},
                     {"t2_qubit", p.t2_qubit},
                     {"cutoff", p.cutoff}};
}

void from_json(const nlohmann::json& j, DeviceParams& p) {
  DeviceParams d;
  if (j.contains("chi")) d.chi = khz_to_angular(j.at("chi").get<double>());
  if (j.contains("chi_prime")) d.chi_prime = khz_to_angular(j.at("chi_prime").get<double>());
  if (j.contains("kerr")) d.kerr = khz_to_angular(j.at("kerr").get<double>());
  if (j.contains("omega_max")) d.omega_max = khz_to_angular(j.at("omega_max").get<double>());
  if (j.contains("dt")) d.dt = j.at("dt").get<double>();
  if (j.contains("t1_cavity")) d.t1_cavity = j.at("t1_cavity").get<double>();
  if (j.contains("t1_qubit")) d.t1_qubit = j.at("t1_qubit").get<double>();
  if (j.contains("t2_qubit")) d.t2_qubit = j.at("t2_qubit").get<double>();
  if (j.contains("cutoff")) d.cutoff = j.at("cutoff").get<int>();
  d.validate();
  p = d;
}

namespace ops {

Matrix annihilation(int cutoff) {
  Matrix m = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

Matrix on_cavity(const Matrix& m) {
  const Eigen::Index c = m.rows();
  Matrix out = Matrix::Zero(2 * c, 2 * c);
  out.topLeftCorner(c, c) = m;
  out.bottomRightCorner(c, c) = m;
  return out;
}

Matrix on_qubit(const Matrix& m, int cutoff) {
  Matrix out = Matrix::Zero(2 * cutoff, 2 * cutoff);
  for (int q = 0; q < 2; ++q)
    for (int r = 0; r < 2; ++r)
      if (m(q, r) != cplx(0.0))
        out.block(q * cutoff, r * cutoff, cutoff, cutoff) =
            m(q, r) * Matrix::Identity(cutoff, cutoff);
  return out;
}

Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
Matrix pauli_y() { return (Matrix(2, 2) << 0, -kI, kI, 0).finished(); }
Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }
Matrix sigma_minus() { return (Matrix(2, 2) << 0, 1, 0, 0).finished(); }
Matrix sigma_plus() { return (Matrix(2, 2) << 0, 0, 1, 0).finished(); }

Matrix a(int cutoff) { return on_cavity(annihilation(cutoff)); }
Matrix number(int cutoff) {
  const Matrix an = annihilation(cutoff);
  return on_cavity(an.adjoint() * an);
}
Matrix sx(int cutoff) { return on_qubit(pauli_x(), cutoff); }
Matrix sy(int cutoff) { return on_qubit(pauli_y(), cutoff); }
Matrix sz(int cutoff) { return on_qubit(pauli_z(), cutoff); }
Matrix sm(int cutoff) { return on_qubit(sigma_minus(), cutoff); }
Matrix sp(int cutoff) { return on_qubit(sigma_plus(), cutoff); }

}  // namespace ops

Matrix build_static_hamiltonian(const DeviceParams& params) {
  const int c = params.cutoff;
  Matrix h = Matrix::Zero(2 * c, 2 * c);
  for (int q = 0; q < 2; ++q) {
    const double z = q == 0 ? 1.0 : -1.0;
    for (int n = 0; n < c; ++n) {
      const double nn1 = static_cast<double>(n) * (n - 1);
      h(ops::index(q, n, c), ops::index(q, n, c)) =
          0.5 * params.kerr * nn1 + 0.5 * params.chi * n * z + 0.5 * params.chi_prime * nn1 * z;
    }
  }
  return h;
}

Matrix build_drive_hamiltonian(const DeviceParams& params, cplx omega_c, cplx omega_q) {
  const double bound = params.omega_max * (1.0 + 1e-12);
  require(std::abs(omega_c) <= bound && std::abs(omega_q) <= bound, ErrorCode::AmplitudeBound,
          "drive amplitude exceeds omega_max");
  const Matrix drive = omega_c * ops::a(params.cutoff) + omega_q * ops::sm(params.cutoff);
  return drive + drive.adjoint();
}

CqedOperators::CqedOperators(const DeviceParams& params)
    : params_(params),
      h_static_(build_static_hamiltonian(params)),
      a_(ops::a(params.cutoff)),
      sm_(ops::sm(params.cutoff)) {}

Matrix CqedOperators::hamiltonian(cplx omega_c, cplx omega_q) const {
  Matrix h = h_static_;
  const int c = params_.cutoff;
  for (int q = 0; q < 2; ++q) {
    for (int n = 1; n < c; ++n) {
      const cplx v = omega_c * std::sqrt(static_cast<double>(n));
      h(ops::index(q, n - 1, c), ops::index(q, n, c)) += v;
      h(ops::index(q, n, c), ops::index(q, n - 1, c)) += std::conj(v);
    }
  }
  for (int n = 0; n < c; ++n) {
    h(ops::index(0, n, c), ops::index(1, n, c)) += omega_q;
    h(ops::index(1, n, c), ops::index(0, n, c)) += std::conj(omega_q);
  }
  return h;
}

}  // namespace holoqed
