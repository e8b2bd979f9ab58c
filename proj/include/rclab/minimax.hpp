#pragma once

#include <Eigen/Dense>
#include <functional>

#include "rclab/common.hpp"

namespace rclab {

/// A convex objective f : R^k -> R given by value and an arbitrary
/// subgradient selection. Used for pointwise maxima of norms, which are
/// convex but only piecewise smooth.
struct MinimaxObjective {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> subgradient;
};

struct MinimaxOptions {
  double tol = 1e-6;
  /// The search box [-box_radius, box_radius]^k must contain a minimizer.
  double box_radius = 1.0;
  int subgradient_iters = 350;
  int max_multistarts = 20;
  /// Pattern search stops when the step reaches
  /// h_floor_factor * max(1, box_radius).
  double h_floor_factor = 1e-9;
  long max_evaluations = 200000000L;
};

struct MinimaxResult {
  Eigen::VectorXd minimizer;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Minimizes a convex piecewise-smooth objective over the given box:
/// deterministic multistart projected subgradient descent followed by a
/// shrinking-step pattern search that handles kinks the gradient phase
/// stalls on. Failed fixed-stencil polls fall back to seeded random
/// directions so narrow kink ridges cannot stall the search permanently.
/// Fully deterministic for fixed inputs.
MinimaxResult minimize_convex(const MinimaxObjective& obj,
                              const MinimaxOptions& opts);

}  // namespace rclab
