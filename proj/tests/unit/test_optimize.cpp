#include "doctest.h"
#include "holoqed/optimize.hpp"

using namespace holoqed;

namespace {

double rosenbrock(const RealVector& x, RealVector* g) {
  double f = 0.0;
  if (g) g->setZero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i);
    const double b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    if (g) {
      (*g)(i) += -400.0 * a * x(i) - 2.0 * b;
      (*g)(i + 1) += 200.0 * a;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("L-BFGS minimises the Rosenbrock valley") {
  opt::LbfgsConfig cfg;
  cfg.max_iters = 2000;
  const auto tr = opt::lbfgs_minimize(rosenbrock, RealVector::Constant(6, -1.2), cfg);
  CHECK(tr.best_value < 1e-12);
  CHECK((tr.best_x - RealVector::Ones(6)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("projected Adam respects the feasible set") {
  // Minimum of |x - (2, 0)|^2 on the unit disc is (1, 0).
  auto f = [](const RealVector& x, RealVector* g) {
    RealVector d = x - RealVector::Unit(2, 0) * 2.0;
    if (g) *g = 2.0 * d;
    return d.squaredNorm();
  };
  auto disc = [](RealVector& x) {
    if (x.norm() > 1.0) x /= x.norm();
  };
  opt::AdamConfig cfg;
  cfg.max_iters = 3000;
  const auto tr = opt::adam_minimize(f, RealVector::Zero(2), cfg, disc);
  CHECK(tr.best_x.norm() <= 1.0 + 1e-15);
  CHECK(tr.best_x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("running best never increases") {
  opt::AdamConfig cfg;
  cfg.max_iters = 300;
  cfg.learning_rate = 0.3;  // deliberately noisy
  const auto tr = opt::adam_minimize(rosenbrock, RealVector::Constant(4, -1.0), cfg);
  double best = tr.history.front();
  for (double v : tr.history) best = std::min(best, v);
  CHECK(best == tr.best_value);
}

TEST_CASE("central differences on a quadratic are exact") {
  auto f = [](const RealVector& x) { return x.dot(x) + 3.0 * x(0); };
  const RealVector x = RealVector::LinSpaced(4, -1.0, 2.0);
  const RealVector g = opt::fd_gradient(f, x, 1e-3);
  RealVector expect = 2.0 * x;
  expect(0) += 3.0;
  CHECK((g - expect).cwiseAbs().maxCoeff() < 1e-9);
}
