#pragma once

#include <utility>
#include <vector>

#include "rclab/geometry.hpp"

namespace rclab {

enum class SolveMethod { subgradient, grid, hybrid };

/// Result of minimizing v -> r(v, F) over a subspace.
///
/// minimizers is a cloud of near-optimal points: the best point found
/// plus (for subspaces of dimension <= 3) every point of a deterministic
/// coefficient grid whose objective value is within cluster_tol of the
/// radius. The first point is always the best one found.
struct CenterSolution {
  double radius = 0.0;
  BoundedSet minimizers;
  double cluster_tol = 0.0;
  long iterations = 0;
  SolveMethod method = SolveMethod::hybrid;
};

/// Sampled slice of {v in V : r(v, F) <= radius + delta}.
struct SublevelCloud {
  double delta = 0.0;
  BoundedSet points;
};

/// Optimizer gave up before reaching its step floor; carries the best
/// iterate found so callers can report partial progress.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, Point best, double value)
      : std::runtime_error(what), best_(std::move(best)), value_(value) {}
  const Point& best_iterate() const { return best_; }
  double best_value() const { return value_; }

 private:
  Point best_;
  double value_;
};

inline constexpr int kMaxSolveDim = 16;     // refuse larger subspaces
inline constexpr int kOracleMaxDim = 3;     // exhaustive grids only here
inline constexpr double kGridPointCap = 5e6;

/// Minimizes r(v, F) over the subspace. cloud_resolution controls the
/// near-minimizer grid per axis (0 = automatic: 201 per axis up to two
/// dimensions, 101 for three, single point above).
CenterSolution restricted_radius(const Subspace& V, const BoundedSet& F,
                                 double tol = 1e-6, int cloud_resolution = 0);

/// Exhaustive reference solve on a coefficient grid over the box
/// [-box_radius, box_radius]^dim(V); dim(V) <= 3. Returns the best grid
/// value and every grid point within the grid-spacing-induced slack of
/// the best.
CenterSolution grid_oracle(const Subspace& V, const BoundedSet& F,
                           double box_radius, int resolution = 201);

/// Samples {v in V : r(v, F) <= sol.radius + delta} on a grid around the
/// solved center. Always contains the solved center itself.
SublevelCloud sublevel_sample(const Subspace& V, const BoundedSet& F,
                              const CenterSolution& sol, double delta,
                              int resolution = 101);

/// Nearest points of V to x (the center problem for the singleton {x}).
CenterSolution metric_projection(const Subspace& V, const Point& x,
                                 double tol = 1e-6, int cloud_resolution = 0);

enum class ModulusKind { P1, P2, LP2, QUR, URED };

struct ModulusCurve {
  ModulusKind kind = ModulusKind::P1;
  /// (eps, delta) pairs in the order the eps grid was given.
  std::vector<std::pair<double, double>> entries;
};

/// True when every sampled point of the delta-sublevel set lies within
/// eps (space norm) of the solved minimizer cloud.
bool sublevel_within_eps(const Subspace& V, const BoundedSet& F,
                         const CenterSolution& sol, double delta, double eps,
                         int resolution);

/// Largest delta (found by bisection, 30 steps, delta <= radius) such
/// that the delta-sublevel collapses into the eps-neighborhood of the
/// center set, for each eps in the grid.
ModulusCurve p1_modulus(const Subspace& V, const BoundedSet& F,
                        const std::vector<double>& eps_grid,
                        int resolution = 101, double tol = 1e-6);

}  // namespace rclab
