#include "holoqed/optimize.hpp"

#include <cmath>
#include <deque>

namespace holoqed::opt {

namespace {

// Running-best bookkeeping shared by both optimisers.
struct Incumbent {
  Trace& trace;
  double window_start;
  int since_window = 0;

  Incumbent(Trace& t, const RealVector& x, double fx) : trace(t), window_start(fx) {
    trace.best_x = x;
    trace.best_value = fx;
    trace.history.push_back(fx);
  }

  void offer(const RealVector& x, double fx) {
    trace.history.push_back(fx);
    if (fx < trace.best_value) {
      trace.best_value = fx;
      trace.best_x = x;
    }
  }

  bool stalled(double tol, int window) {
    if (++since_window < window) return false;
    const bool stuck = window_start - trace.best_value < tol;
    window_start = trace.best_value;
    since_window = 0;
    return stuck;
  }
};

}  // namespace

Trace adam_minimize(const Objective& f, RealVector x, const AdamConfig& cfg,
                    const Projection& project) {
  if (project) project(x);
  Trace trace;
  RealVector g(x.size());
  double fx = f(x, &g);
  Incumbent inc(trace, x, fx);
  if (fx <= cfg.target) {
    trace.reached_target = true;
    return trace;
  }
  RealVector m = RealVector::Zero(x.size());
  RealVector v = RealVector::Zero(x.size());
  double b1 = 1.0, b2 = 1.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseAbs2();
    b1 *= cfg.beta1;
    b2 *= cfg.beta2;
    const RealVector mhat = m / (1.0 - b1);
    const RealVector vhat = v / (1.0 - b2);
    x.array() -= cfg.learning_rate * mhat.array() / (vhat.array().sqrt() + cfg.epsilon);
    if (project) project(x);
    fx = f(x, &g);
    inc.offer(x, fx);
    trace.iterations = it;
    if (trace.best_value <= cfg.target) {
      trace.reached_target = true;
      break;
    }
    if (inc.stalled(cfg.stall_tol, cfg.stall_window)) {
      trace.stalled = true;
      break;
    }
  }
  return trace;
}

Trace lbfgs_minimize(const Objective& f, RealVector x, const LbfgsConfig& cfg) {
  Trace trace;
  RealVector g(x.size());
  double fx = f(x, &g);
  Incumbent inc(trace, x, fx);
  if (fx <= cfg.target) {
    trace.reached_target = true;
    return trace;
  }
  std::deque<RealVector> s_hist, y_hist;
  std::deque<double> rho_hist;
  RealVector g_new(x.size());
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < cfg.grad_tol) break;
    // Two-loop recursion for the quasi-Newton direction.
    RealVector q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    else gamma = 1.0 / std::max(1.0, g.norm());
    q *= gamma;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    RealVector d = -q;
    double slope = g.dot(d);
    if (slope >= 0) {  // lost descent; fall back to steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g / std::max(1.0, g.norm());
      slope = g.dot(d);
    }
    double step = 1.0;
    double f_new = 0.0;
    RealVector x_new;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * d;
      f_new = f(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    trace.iterations = it;
    if (!accepted) {
      trace.stalled = true;
      break;
    }
    const RealVector s = x_new - x;
    const RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * y.squaredNorm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > cfg.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = x_new;
    fx = f_new;
    g = g_new;
    inc.offer(x, fx);
    if (fx <= cfg.target) {
      trace.reached_target = true;
      break;
    }
    if (inc.stalled(cfg.stall_tol, cfg.stall_window)) {
      trace.stalled = true;
      break;
    }
  }
  return trace;
}

RealVector fd_gradient(const std::function<double(const RealVector&)>& f, const RealVector& x,
                       double step) {
  RealVector g(x.size());
  RealVector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = xp(i);
    xp(i) = keep + step;
    const double fp = f(xp);
    xp(i) = keep - step;
    const double fm = f(xp);
    xp(i) = keep;
    g(i) = (fp - fm) / (2.0 * step);
  }
  return g;
}

}  // namespace holoqed::opt
