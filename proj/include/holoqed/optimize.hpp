#pragma once

#include <functional>
#include <vector>

#include "holoqed/types.hpp"

namespace holoqed::opt {

/// Returns f(x) and, when `grad` is non-null, writes df/dx into it.
using Objective = std::function<double(const RealVector& x, RealVector* grad)>;
using Projection = std::function<void(RealVector& x)>;

struct Trace {
  RealVector best_x;
  double best_value = 0.0;
  std::vector<double> history;  // objective at every iteration, including the start
  int iterations = 0;
  bool reached_target = false;
  bool stalled = false;
};

struct AdamConfig {
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_iters = 2000;
  double target = -1e300;     // stop once f <= target
  double stall_tol = 1e-12;   // minimum improvement of the running best ...
  int stall_window = 50;      // ... over this many iterations
};

/// Projected Adam descent. The projection runs after every update, so every
/// iterate (and therefore the returned minimiser) is feasible.
Trace adam_minimize(const Objective& f, RealVector x0, const AdamConfig& cfg,
                    const Projection& project = {});

struct LbfgsConfig {
  int memory = 12;
  int max_iters = 500;
  double grad_tol = 1e-10;
  double target = -1e300;
  double stall_tol = 1e-13;
  int stall_window = 20;
};

/// Unconstrained limited-memory BFGS with an Armijo backtracking line search.
Trace lbfgs_minimize(const Objective& f, RealVector x0, const LbfgsConfig& cfg);

/// Central-difference gradient of a scalar function.
RealVector fd_gradient(const std::function<double(const RealVector&)>& f, const RealVector& x,
                       double step);

}  // namespace holoqed::opt
