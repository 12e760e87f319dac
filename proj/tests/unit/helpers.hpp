#pragma once

#include <random>

#include "holoqed/propagator.hpp"
#include "holoqed/types.hpp"

namespace holoqed::testing {

inline Matrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

// Independent reference: exp(-i H t) from a dense Hermitian eigensolve.
inline Matrix spectral_exp(const Matrix& h, double t) {
  Eigen::ComplexEigenSolver<Matrix> es(h);
  Vector ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::exp(-kI * es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().inverse();
}

inline Waveform random_waveform(std::size_t n_steps, double omega_max, std::mt19937_64& rng,
                                double radius = 1.0, double dt = 10.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Waveform wf = Waveform::zeros(n_steps, dt);
  auto draw = [&] {
    return std::polar(radius * omega_max * std::sqrt(u(rng)), kTwoPi * u(rng));
  };
  for (auto& s : wf.steps) {
    s.cavity = draw();
    s.qubit = draw();
  }
  return wf;
}

template <class F>
RealVector central_difference(F&& f, const RealVector& x, double h) {
  RealVector g(x.size());
  RealVector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = xp(i);
    xp(i) = keep + h;
    const double fp = f(xp);
    xp(i) = keep - h;
    const double fm = f(xp);
    xp(i) = keep;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace holoqed::testing
