#include "rclab/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rclab {

namespace {

using Vec = Eigen::VectorXd;

Vec clamp_box(Vec x, double r) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = std::min(r, std::max(-r, x[i]));
  }
  return x;
}

// Deterministic multistart points: the origin plus search-box corners.
// When there are more corners than slots, an evenly strided deterministic
// subset is used.
std::vector<Vec> start_points(int k, double r, int max_starts) {
  std::vector<Vec> starts;
  starts.push_back(Vec::Zero(k));
  if (k == 0 || max_starts <= 1) return starts;
  const long corners = k < 30 ? (1L << k) : -1;
  const int budget = max_starts - 1;
  auto corner = [&](long bits) {
    Vec c(k);
    for (int i = 0; i < k; ++i) c[i] = (bits >> i) & 1 ? r : -r;
    return c;
  };
  if (corners > 0 && corners <= budget) {
    for (long b = 0; b < corners; ++b) starts.push_back(corner(b));
  } else {
    // Stride through corner bit patterns; stride chosen odd so the
    // selection cycles through all of them over the budget.
    const long total = corners > 0 ? corners : (1L << 30);
    const long stride = std::max(1L, total / budget) | 1L;
    long b = 1;  // skip the all-minus corner's complement bias at 0
    for (int i = 0; i < budget; ++i) {
      starts.push_back(corner(b % total));
      b += stride;
    }
  }
  return starts;
}

// Poll directions for the pattern search, unit Euclidean length.
// Small k: the full {-1,0,1}^k stencil. Larger k: axes, coordinate-pair
// diagonals, and a deterministic set of rotated axes so kinked level
// sets not aligned with the axes still admit a descent direction.
std::vector<Vec> poll_directions(int k) {
  std::vector<Vec> dirs;
  if (k == 0) return dirs;
  if (k <= 7) {
    std::vector<int> idx(k, 0);
    Vec d(k);
    while (true) {
      bool nonzero = false;
      for (int i = 0; i < k; ++i) {
        d[i] = idx[i] - 1;
        if (idx[i] != 1) nonzero = true;
      }
      if (nonzero) dirs.push_back(d / d.norm());
      int p = k - 1;
      while (p >= 0 && ++idx[p] == 3) {
        idx[p] = 0;
        --p;
      }
      if (p < 0) break;
    }
    return dirs;
  }
  for (int i = 0; i < k; ++i) {
    Vec d = Vec::Zero(k);
    d[i] = 1.0;
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          Vec d = Vec::Zero(k);
          d[i] = si;
          d[j] = sj;
          dirs.push_back(d / d.norm());
        }
      }
    }
  }
  Rng rng(0x5eedul * static_cast<std::uint64_t>(k + 1));
  for (int t = 0; t < 2 * k; ++t) {
    Vec d(k);
    for (int i = 0; i < k; ++i) d[i] = rng.normal();
    const double n = d.norm();
    if (n > 1e-12) {
      dirs.push_back(d / n);
      dirs.push_back(-d / n);
    }
  }
  return dirs;
}

// Minimum-Euclidean-norm point of the convex hull of the given vectors,
// found by pairwise weight transfer on the simplex: repeatedly shift
// weight from the support vector most aligned with the current point to
// the vector least aligned with it, using the exact one-dimensional step.
Vec min_norm_hull_point(const std::vector<Vec>& g) {
  const int m = static_cast<int>(g.size());
  int i0 = 0;
  for (int i = 1; i < m; ++i) {
    if (g[i].squaredNorm() < g[i0].squaredNorm()) i0 = i;
  }
  std::vector<double> lam(m, 0.0);
  lam[i0] = 1.0;
  Vec w = g[i0];
  for (int it = 0; it < 400; ++it) {
    int imin = 0, imax = -1;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (int i = 0; i < m; ++i) {
      const double wi = w.dot(g[i]);
      if (wi < vmin) {
        vmin = wi;
        imin = i;
      }
      if (lam[i] > 0.0 && wi > vmax) {
        vmax = wi;
        imax = i;
      }
    }
    if (imax < 0 || vmax - vmin <= 1e-14 * std::max(1.0, w.squaredNorm())) {
      break;
    }
    const Vec diff = g[imin] - g[imax];
    const double dd = diff.squaredNorm();
    if (dd < 1e-30) break;
    const double step = std::min(-w.dot(diff) / dd, lam[imax]);
    if (!(step > 0.0)) break;
    lam[imax] -= step;
    lam[imin] += step;
    w += step * diff;
  }
  return w;
}

}  // namespace

MinimaxResult minimize_convex(const MinimaxObjective& obj,
                              const MinimaxOptions& opts) {
  const int k = obj.dim;
  MinimaxResult res;
  if (k == 0) {
    res.minimizer = Vec(0);
    res.value = obj.value(res.minimizer);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }
  const double R = opts.box_radius;
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw ValidationError("minimize_convex requires a positive box radius");
  }

  long evals = 0;
  auto f = [&](const Vec& x) {
    ++evals;
    return obj.value(x);
  };

  Vec best;
  double best_val = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& x, double v) {
    if (v < best_val) {
      best_val = v;
      best = x;
    }
  };

  // Phase 1: projected subgradient descent from each start with a
  // diminishing normalized step. Tracks the best iterate seen, which for
  // nonsmooth objectives is not the last one.
  for (const Vec& s0 : start_points(k, R, opts.max_multistarts)) {
    Vec x = s0;
    consider(x, f(x));
    for (int it = 1; it <= opts.subgradient_iters; ++it) {
      Vec g = obj.subgradient(x);
      const double gn = g.norm();
      if (gn < 1e-15) break;  // at (or numerically at) a smooth minimum
      x = clamp_box(x - (R / std::sqrt(static_cast<double>(it))) * (g / gn),
                    R);
      consider(x, f(x));
      if (evals > opts.max_evaluations) break;
    }
    if (evals > opts.max_evaluations) break;
  }

  // Phase 2: pattern search from the incumbent. Polls every direction at
  // step h, moves to the best strict improvement (with greedy step
  // expansion), halves h otherwise. A fixed stencil can stall on a kink
  // ridge whose descent cone is narrower than the stencil's angular gaps,
  // so every failed fixed poll is followed by a batch of fresh seeded
  // random unit directions before the step shrinks; the union of polled
  // directions is then asymptotically dense and the step floor bounds the
  // final accuracy on smooth valleys.
  const std::vector<Vec> dirs = poll_directions(k);
  const int random_batch = k >= 2 ? std::max(16, 4 * k) : 0;
  Rng poll_rng(0x9e3779b97f4a7c15ull);
  const double h_floor = opts.h_floor_factor * std::max(1.0, R);
  const double h_max = std::max(R / 4.0, h_floor);
  Vec x = best;
  double fx = best_val;
  bool budget_ok = true;

  auto pattern_search = [&](double h0) {
    double h = std::min(h0, h_max);
    while (h > h_floor && budget_ok) {
      double best_step_val = fx;
      Vec best_step;
      auto try_dir = [&](const Vec& d, double step) {
        Vec y = clamp_box(x + step * d, R);
        const double fy = f(y);
        if (fy < best_step_val) {
          best_step_val = fy;
          best_step = y;
        }
        if (evals > opts.max_evaluations) budget_ok = false;
      };
      for (const Vec& d : dirs) {
        try_dir(d, h);
        if (!budget_ok) return;
      }
      if (best_step.size() == 0) {
        for (int t = 0; t < random_batch && budget_ok; ++t) {
          Vec d(k);
          for (int i = 0; i < k; ++i) d[i] = poll_rng.normal();
          const double n = d.norm();
          if (n >= 1e-12) try_dir(d, h / n);
        }
        if (!budget_ok) return;
      }
      if (best_step.size() > 0) {
        // Expand along the accepted move while it keeps improving.
        Vec dir = best_step - x;
        Vec cur = best_step;
        double cur_val = best_step_val;
        for (int e = 0; e < 40; ++e) {
          Vec y = clamp_box(cur + dir, R);
          if (y == cur) break;
          const double fy = f(y);
          if (evals > opts.max_evaluations) budget_ok = false;
          if (fy >= cur_val || !budget_ok) break;
          cur = y;
          cur_val = fy;
          dir *= 2.0;
        }
        x = cur;
        fx = cur_val;
        consider(x, fx);
        // Recover scale after a travel at a tiny step so the search does
        // not keep crawling.
        h = std::min(2.0 * h, h_max);
      } else {
        h *= 0.5;
      }
    }
  };

  pattern_search(h_max);

  // Phase 3: gradient sampling. A tie ridge between several smooth
  // farthest-point branches leaves a descent cone too narrow for any
  // direction stencil to hit reliably; the minimum-norm vector in the
  // convex hull of subgradients sampled around the incumbent recovers the
  // valley-floor direction instead. The sampling radius halves whenever
  // the hull point is small or the line search fails, so the phase works
  // down to the accuracy floor.
  if (k >= 2 && budget_ok) {
    double sigma = R / 16.0;
    double nu = 1e-2 * std::max(1.0, fx);
    const double sigma_floor = 1e-9 * std::max(1.0, R);
    const int samples = 2 * k + 8;
    std::vector<Vec> grads;
    for (int outer = 0; outer < 240 && budget_ok; ++outer) {
      grads.clear();
      evals += 1 + samples;
      grads.push_back(obj.subgradient(x));
      for (int s = 0; s < samples; ++s) {
        Vec u(k);
        for (int i = 0; i < k; ++i) u[i] = poll_rng.normal();
        const double n = u.norm();
        if (n < 1e-12) continue;
        grads.push_back(obj.subgradient(clamp_box(x + (sigma / n) * u, R)));
      }
      const Vec d = min_norm_hull_point(grads);
      const double dn = d.norm();
      bool moved = false;
      if (dn > nu) {
        const Vec dir = -d / dn;
        double t = 4.0 * sigma;
        for (int j = 0; j < 46 && budget_ok; ++j, t *= 0.5) {
          Vec y = clamp_box(x + t * dir, R);
          const double fy = f(y);
          if (evals > opts.max_evaluations) budget_ok = false;
          if (fy < fx - 1e-4 * t * dn) {
            x = y;
            fx = fy;
            consider(x, fx);
            moved = true;
            break;
          }
        }
      }
      if (!moved) {
        sigma *= 0.5;
        nu *= 0.5;
        if (sigma < sigma_floor) break;
      }
    }
    // Polish any smooth tail the sampling phase left behind.
    pattern_search(h_max / 256.0);
  }
  consider(x, fx);

  res.minimizer = best;
  res.value = best_val;
  res.evaluations = evals;
  res.converged = budget_ok;
  return res;
}

}  // namespace rclab
