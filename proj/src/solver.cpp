#include "rclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rclab/minimax.hpp"

namespace rclab {

namespace {

using Vec = Eigen::VectorXd;

void check_problem(const Subspace& V, const BoundedSet& F) {
  if (V.space != F.space) {
    throw ValidationError("subspace and set must live in the same space");
  }
  if (V.space.dim > kMaxSolveDim) {
    throw UnsupportedError("space dimension above " +
                           std::to_string(kMaxSolveDim) + " is not supported");
  }
}

// Objective c -> max_a ||onb c - a|| on subspace coordinates. The
// subgradient uses the lowest-index farthest point so kinked maxima are
// resolved deterministically.
MinimaxObjective center_objective(const Subspace& V, const BoundedSet& F) {
  MinimaxObjective obj;
  obj.dim = V.subspace_dim();
  obj.value = [&V, &F](const Vec& c) {
    const Point v = V.from_coeffs(c);
    double r = 0.0;
    for (const auto& a : F.points) r = std::max(r, norm(V.space, v - a));
    return r;
  };
  obj.subgradient = [&V, &F](const Vec& c) {
    const Point v = V.from_coeffs(c);
    double r = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < F.points.size(); ++i) {
      const double d = norm(V.space, v - F.points[i]);
      if (d > r) {
        r = d;
        arg = i;
      }
    }
    const Point g = norm_subgradient(V.space, v - F.points[arg]);
    return Vec(V.onb.transpose() * g);
  };
  return obj;
}

int effective_resolution(int requested, int k) {
  int res = requested;
  // Cap the total grid size; keep the resolution odd so the grid center
  // is itself a grid point.
  while (res > 3 && std::pow(static_cast<double>(res),
                             static_cast<double>(k)) > kGridPointCap) {
    --res;
  }
  if (res % 2 == 0) --res;
  return std::max(res, 3);
}

// Visits every point of the coefficient grid center +/- half * unit steps.
template <typename Fn>
void for_each_grid_point(const Vec& center, double half, int res, Fn&& fn) {
  const int k = static_cast<int>(center.size());
  if (k == 0) {
    fn(Vec(0));
    return;
  }
  const double step = res > 1 ? 2.0 * half / (res - 1) : 0.0;
  std::vector<int> idx(k, 0);
  Vec c(k);
  while (true) {
    for (int i = 0; i < k; ++i) c[i] = center[i] - half + step * idx[i];
    fn(c);
    int d = k - 1;
    while (d >= 0 && ++idx[d] == res) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
}

}  // namespace

CenterSolution restricted_radius(const Subspace& V, const BoundedSet& F,
                                 double tol, int cloud_resolution) {
  check_problem(V, F);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const int k = V.subspace_dim();

  const Point zero = Point::Zero(V.space.dim);
  const double r0 = farthest_radius(V.space, zero, F);

  auto finish = [&](double radius, std::vector<Point> cloud, double ctol,
                    long iters, SolveMethod method) {
    CenterSolution sol{radius, BoundedSet(V.space, std::move(cloud)), ctol,
                       iters, method};
    return sol;
  };

  if (k == 0 || r0 == 0.0) {
    // V = {0}, or F = {0} which has its center at the origin.
    const double radius = r0;
    return finish(radius, {zero}, 1e-6 * std::max(1.0, radius), 1,
                  SolveMethod::hybrid);
  }

  const double kappa = euclidean_lower_factor(V.space);
  const double box_r = 2.0 * r0 / kappa;

  MinimaxObjective obj = center_objective(V, F);
  MinimaxOptions mopts;
  mopts.tol = tol;
  mopts.box_radius = box_r;
  MinimaxResult mres = minimize_convex(obj, mopts);
  if (!mres.converged) {
    throw SolveError("center solve exhausted its evaluation budget",
                     V.from_coeffs(mres.minimizer), mres.value);
  }

  double radius = mres.value;
  const double ctol = 1e-6 * std::max(1.0, radius);
  std::vector<Point> cloud;
  cloud.push_back(V.from_coeffs(mres.minimizer));
  long iters = mres.evaluations;

  if (k <= 3) {
    const int want = cloud_resolution > 0 ? cloud_resolution
                                          : (k <= 2 ? 201 : 101);
    const int res = effective_resolution(want, k);
    for_each_grid_point(Vec::Zero(k), box_r, res, [&](const Vec& c) {
      ++iters;
      if (obj.value(c) <= radius + ctol) cloud.push_back(V.from_coeffs(c));
    });
  }
  return finish(radius, std::move(cloud), ctol, iters, SolveMethod::hybrid);
}

CenterSolution grid_oracle(const Subspace& V, const BoundedSet& F,
                           double box_radius, int resolution) {
  check_problem(V, F);
  const int k = V.subspace_dim();
  if (k > kOracleMaxDim) {
    throw UnsupportedError("grid oracle supports subspace dimension <= 3");
  }
  if (resolution < 11) {
    throw ValidationError("grid oracle resolution must be >= 11");
  }
  if (!(box_radius > 0.0)) {
    throw ValidationError("grid oracle box radius must be positive");
  }
  if (std::pow(static_cast<double>(resolution), static_cast<double>(k)) >
      kGridPointCap) {
    throw UnsupportedError("grid oracle grid exceeds the point cap");
  }

  MinimaxObjective obj = center_objective(V, F);
  double best = std::numeric_limits<double>::infinity();
  long iters = 0;
  for_each_grid_point(Vec::Zero(k), box_radius, resolution, [&](const Vec& c) {
    ++iters;
    best = std::min(best, obj.value(c));
  });

  // Between grid points the objective moves at most the norm's Euclidean
  // Lipschitz constant times half the cell diagonal.
  const double h =
      resolution > 1 ? 2.0 * box_radius / (resolution - 1) : 0.0;
  const double slack = euclidean_upper_factor(V.space) * h *
                           std::sqrt(static_cast<double>(std::max(k, 1))) /
                           2.0 +
                       1e-15 * std::max(1.0, best);

  std::vector<Point> cloud;
  for_each_grid_point(Vec::Zero(k), box_radius, resolution, [&](const Vec& c) {
    if (obj.value(c) <= best + slack) cloud.push_back(V.from_coeffs(c));
  });
  CenterSolution sol{best, BoundedSet(V.space, std::move(cloud)), slack,
                     iters, SolveMethod::grid};
  return sol;
}

SublevelCloud sublevel_sample(const Subspace& V, const BoundedSet& F,
                              const CenterSolution& sol, double delta,
                              int resolution) {
  check_problem(V, F);
  if (delta < 0.0) throw ValidationError("delta must be nonnegative");
  if (resolution < 3) throw ValidationError("resolution must be >= 3");
  const int k = V.subspace_dim();
  const Point& center = sol.minimizers.points.front();

  std::vector<Point> pts;
  pts.push_back(center);
  if (k > 0) {
    // Any point of the sublevel set is within 2*radius + delta of the
    // solved center in the space norm, hence within (2*radius + delta) /
    // kappa in coefficient Euclidean distance.
    const double kappa = euclidean_lower_factor(V.space);
    const double half = (2.0 * sol.radius + delta) / kappa;
    const int res = effective_resolution(resolution, k);
    const double cut =
        sol.radius + delta + 1e-12 * std::max(1.0, sol.radius);
    const MinimaxObjective obj = center_objective(V, F);
    const Vec c0 = V.coeffs_of(center);
    if (half > 0.0) {
      for_each_grid_point(c0, half, res, [&](const Vec& c) {
        if (obj.value(c) <= cut) pts.push_back(V.from_coeffs(c));
      });
    }
  }
  return SublevelCloud{delta, BoundedSet(V.space, std::move(pts))};
}

CenterSolution metric_projection(const Subspace& V, const Point& x,
                                 double tol, int cloud_resolution) {
  return restricted_radius(V, BoundedSet(V.space, {x}), tol,
                           cloud_resolution);
}

bool sublevel_within_eps(const Subspace& V, const BoundedSet& F,
                         const CenterSolution& sol, double delta, double eps,
                         int resolution) {
  const SublevelCloud cloud = sublevel_sample(V, F, sol, delta, resolution);
  for (const auto& v : cloud.points.points) {
    if (dist_to_points(V.space, v, sol.minimizers.points) > eps + 1e-12) {
      return false;
    }
  }
  return true;
}

ModulusCurve p1_modulus(const Subspace& V, const BoundedSet& F,
                        const std::vector<double>& eps_grid, int resolution,
                        double tol) {
  const CenterSolution sol = restricted_radius(V, F, tol);
  ModulusCurve curve;
  curve.kind = ModulusKind::P1;
  for (const double eps : eps_grid) {
    if (!(eps > 0.0)) throw ValidationError("eps values must be positive");
    const double delta_max = sol.radius;
    double delta = 0.0;
    if (delta_max > 0.0) {
      if (sublevel_within_eps(V, F, sol, delta_max, eps, resolution)) {
        delta = delta_max;
      } else {
        double lo = 0.0, hi = delta_max;
        for (int it = 0; it < 30; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (sublevel_within_eps(V, F, sol, mid, eps, resolution)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        delta = lo;
      }
    }
    curve.entries.emplace_back(eps, delta);
  }
  return curve;
}

}  // namespace rclab
