#include "rclab/property_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rclab {

namespace {

double min_radius(const std::vector<CenterSolution>& sols) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) r = std::min(r, s.radius);
  return r;
}

// Shared 30-step bisection over [0, delta_max] for a monotone pass/fail
// predicate (pass at small delta). Returns delta_max itself when even it
// passes, 0 when nothing does.
template <typename Check>
double bisect_delta(double delta_max, Check&& check) {
  if (delta_max <= 0.0) return 0.0;
  if (check(delta_max)) return delta_max;
  double lo = 0.0, hi = delta_max;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (check(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

SetFamily::SetFamily(std::vector<BoundedSet> members_, Normalization n)
    : members(std::move(members_)), normalization(n) {
  if (members.empty()) {
    throw ValidationError("set family must have at least one member");
  }
  for (const auto& m : members) {
    if (m.space != members.front().space) {
      throw ValidationError("family members must share one space");
    }
  }
}

std::vector<CenterSolution> solve_family(const Subspace& V,
                                         const SetFamily& fam, double tol) {
  std::vector<CenterSolution> sols;
  sols.reserve(fam.members.size());
  for (const auto& m : fam.members) {
    sols.push_back(restricted_radius(V, m, tol));
  }
  if (fam.normalization == Normalization::rad_eq_1) {
    for (std::size_t i = 0; i < sols.size(); ++i) {
      if (std::abs(sols[i].radius - 1.0) > 1e-6) {
        throw ValidationError("family member " + std::to_string(i) +
                              " violates the rad_eq_1 normalization (radius " +
                              std::to_string(sols[i].radius) + ")");
      }
    }
  }
  return sols;
}

namespace {

double p2_delta_at(const Subspace& V, const SetFamily& fam,
                   const std::vector<CenterSolution>& sols, double eps,
                   int resolution) {
  const double delta_max = min_radius(sols);
  return bisect_delta(delta_max, [&](double delta) {
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      if (!sublevel_within_eps(V, fam.members[i], sols[i], delta, eps,
                               resolution)) {
        return false;
      }
    }
    return true;
  });
}

double lp2_delta_at(const Subspace& V, const SetFamily& fam,
                    const std::vector<CenterSolution>& sols,
                    const std::vector<double>& anchor_dist, double eps,
                    int resolution) {
  const double delta_max = min_radius(sols);
  return bisect_delta(delta_max, [&](double delta) {
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      if (anchor_dist[i] >= delta) continue;  // outside the local window
      if (!sublevel_within_eps(V, fam.members[i], sols[i], delta, eps,
                               resolution)) {
        return false;
      }
    }
    return true;
  });
}

}  // namespace

ModulusCurve p2_modulus(const Subspace& V, const SetFamily& fam,
                        const std::vector<double>& eps_grid, int resolution,
                        double tol) {
  const auto sols = solve_family(V, fam, tol);
  ModulusCurve curve;
  curve.kind = ModulusKind::P2;
  for (const double eps : eps_grid) {
    if (!(eps > 0.0)) throw ValidationError("eps values must be positive");
    curve.entries.emplace_back(eps,
                               p2_delta_at(V, fam, sols, eps, resolution));
  }
  return curve;
}

ModulusCurve lp2_modulus(const Subspace& V, const SetFamily& fam,
                         const BoundedSet& anchor,
                         const std::vector<double>& eps_grid, int resolution,
                         double tol) {
  const auto sols = solve_family(V, fam, tol);
  std::vector<double> anchor_dist;
  anchor_dist.reserve(fam.members.size());
  for (const auto& m : fam.members) {
    anchor_dist.push_back(hausdorff(m, anchor));
  }
  ModulusCurve curve;
  curve.kind = ModulusKind::LP2;
  for (const double eps : eps_grid) {
    if (!(eps > 0.0)) throw ValidationError("eps values must be positive");
    curve.entries.emplace_back(
        eps, lp2_delta_at(V, fam, sols, anchor_dist, eps, resolution));
  }
  return curve;
}

LocalUniformComparison local_vs_uniform_compare(const Subspace& V,
                                                const SetFamily& fam,
                                                double eps, int resolution,
                                                double tol) {
  const auto sols = solve_family(V, fam, tol);
  LocalUniformComparison out;
  out.eps = eps;
  out.uniform_delta = p2_delta_at(V, fam, sols, eps, resolution);
  out.min_anchor_delta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < fam.members.size(); ++a) {
    std::vector<double> anchor_dist;
    anchor_dist.reserve(fam.members.size());
    for (const auto& m : fam.members) {
      anchor_dist.push_back(hausdorff(m, fam.members[a]));
    }
    const double d = lp2_delta_at(V, fam, sols, anchor_dist, eps, resolution);
    out.anchor_deltas.push_back(d);
    out.min_anchor_delta = std::min(out.min_anchor_delta, d);
  }
  return out;
}

std::vector<SemicontinuityRow> semicontinuity_gap(
    const Subspace& V, const std::vector<BoundedSet>& sets, double tol,
    int cloud_resolution) {
  if (sets.size() < 2) {
    throw ValidationError(
        "semicontinuity table needs at least one set plus the limit set");
  }
  const BoundedSet& limit = sets.back();
  const CenterSolution limit_sol =
      restricted_radius(V, limit, tol, cloud_resolution);
  std::vector<SemicontinuityRow> rows;
  rows.reserve(sets.size() - 1);
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    const CenterSolution sol =
        restricted_radius(V, sets[i], tol, cloud_resolution);
    SemicontinuityRow row;
    row.input_hausdorff = hausdorff(sets[i], limit);
    row.lhsc_gap = directed_hausdorff(V.space, limit_sol.minimizers,
                                      sol.minimizers);
    row.uhsc_gap = directed_hausdorff(V.space, sol.minimizers,
                                      limit_sol.minimizers);
    rows.push_back(row);
  }
  return rows;
}

QurResult qur_probe(const Space& space, const Subspace& Y, double eps,
                    int v_samples, const SamplerCfg& cfg) {
  if (Y.space != space) {
    throw ValidationError("subspace does not live in the given space");
  }
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (v_samples < 1) throw ValidationError("v_samples must be >= 1");
  const int k = Y.subspace_dim();

  static constexpr double kLadder[] = {0.2, 0.1, 0.05, 0.02, 0.01};
  QurResult out;
  if (k == 0) {
    out.delta_estimate = kLadder[0];  // recentering at w = 0 always works
    return out;
  }

  // Deterministic probe points of Y with norms spread over (0, ~2].
  // Beyond norm 2 the intersection is empty and the condition vacuous.
  std::vector<Point> vs;
  Rng rng(0xD1CEull);
  for (int i = 0; i < v_samples; ++i) {
    Eigen::VectorXd c(k);
    for (int j = 0; j < k; ++j) c[j] = rng.normal();
    if (c.norm() < 1e-12) c[0] = 1.0;
    Point v = Y.from_coeffs(c);
    const double nv = norm(space, v);
    const double target = 0.05 + 2.0 * (i + 0.5) / v_samples;
    vs.push_back(v * (target / nv));
  }

  // Candidate recenterings: the clamped probe point, half of it, the
  // origin, then a coefficient grid over the eps box.
  auto candidates = [&](const Point& v) {
    std::vector<Point> ws;
    const double nv = norm(space, v);
    if (nv > 0.0) {
      ws.push_back(v * std::min(1.0, eps / nv));
      ws.push_back(v * std::min(0.5, eps / nv));
    }
    ws.push_back(Point::Zero(space.dim));
    const int res = 7;
    std::vector<int> idx(k, 0);
    Eigen::VectorXd c(k);
    while (true) {
      for (int j = 0; j < k; ++j) {
        c[j] = -eps + 2.0 * eps * idx[j] / (res - 1);
      }
      Point w = Y.from_coeffs(c);
      if (norm(space, w) <= eps) ws.push_back(std::move(w));
      int d = k - 1;
      while (d >= 0 && ++idx[d] == res) {
        idx[d] = 0;
        --d;
      }
      if (d < 0) break;
    }
    return ws;
  };

  const Point origin = Point::Zero(space.dim);
  Point last_witness;
  bool have_witness = false;
  for (const double delta : kLadder) {
    bool all_ok = true;
    for (const Point& v : vs) {
      const auto samples =
          ball_intersection_samples(space, origin, 1.0, v, 1.0 - delta, cfg);
      if (samples.empty()) continue;
      bool found = false;
      for (const Point& w : candidates(v)) {
        bool admissible = true;
        for (const Point& s : samples) {
          if (norm(space, s - w) > 1.0 - delta + 1e-12) {
            admissible = false;
            break;
          }
        }
        if (admissible) {
          found = true;
          break;
        }
      }
      if (!found) {
        all_ok = false;
        last_witness = v;
        have_witness = true;
        break;
      }
    }
    if (all_ok) {
      out.delta_estimate = delta;
      return out;
    }
  }
  out.delta_estimate = 0.0;
  if (have_witness) out.witness = last_witness;
  return out;
}

namespace {

// Smallest/largest s with ||base + s*zhat|| <= 1, assuming some s
// qualifies; and the norm minimum over s, found by convex section search.
struct Chord {
  bool exists = false;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

Chord find_chord(const Space& space, const Point& base, const Point& zhat,
                 double base_norm_bound) {
  auto g = [&](double s) { return norm(space, base + s * zhat); };
  const double S = base_norm_bound + 2.0;
  double lo = -S, hi = S;
  // Ternary search for the (convex) minimum over s.
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) <= g(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double s_min = 0.5 * (lo + hi);
  Chord c;
  if (g(s_min) > 1.0 + 1e-14) return c;
  c.exists = true;
  // Bisect for each boundary crossing away from the feasible point.
  double a = s_min, b = S;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (g(m) <= 1.0 ? a : b) = m;
  }
  c.s_hi = a;
  a = s_min;
  b = -S;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (g(m) <= 1.0 ? a : b) = m;
  }
  c.s_lo = a;
  return c;
}

}  // namespace

UredReport ured_probe(const Space& space, const Point& z,
                      const std::vector<double>& eps_grid, int samples,
                      double tol) {
  if (z.size() != space.dim) {
    throw ValidationError("direction dimension does not match space");
  }
  const double nz = norm(space, z);
  if (nz <= 0.0) throw ValidationError("direction must be nonzero");
  const Point zhat = z / nz;
  const int dim = space.dim;

  // Offset directions: canonical axes, a Euclidean-orthonormal
  // complement of the direction, and extra deterministic rotations.
  std::vector<Point> dirs;
  const Eigen::VectorXd ze = zhat / zhat.norm();
  for (int i = 0; i < dim; ++i) {
    Point e = Point::Zero(dim);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  {
    Eigen::MatrixXd M(dim, 1);
    M.col(0) = ze;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    for (int j = 1; j < dim; ++j) dirs.push_back(Q.col(j));
  }
  Rng rng(0xACE5ull);
  for (int t = 0; t < samples; ++t) {
    Point d(dim);
    for (int i = 0; i < dim; ++i) d[i] = rng.normal();
    if (d.norm() > 1e-12) dirs.push_back(d / d.norm());
  }

  UredReport rep;
  rep.curve.kind = ModulusKind::URED;
  for (const double eps : eps_grid) {
    if (!(eps > 0.0) || eps > 2.0) {
      throw ValidationError("ured eps values must lie in (0, 2]");
    }
    double best = std::numeric_limits<double>::infinity();
    Point bx = Point::Zero(dim), by = Point::Zero(dim);
    auto offer = [&](const Point& base, double s_a) {
      const Point x = base + s_a * zhat;
      const Point y = base + (s_a + eps) * zhat;
      const double v = 1.0 - norm(space, base + (s_a + eps / 2.0) * zhat);
      if (v < best) {
        best = v;
        bx = x;
        by = y;
      }
    };

    for (const Point& u : dirs) {
      // Work with the component of u perpendicular (Euclidean) to the
      // direction so (a, s) parametrizes each line once.
      Point up = u - u.dot(ze) * ze;
      const double n2 = up.norm();
      if (n2 < 1e-9) continue;
      up /= n2;
      const double up_norm = norm(space, up);

      // Largest offset whose chord still has length >= eps; chord length
      // is non-increasing in the offset for a symmetric convex ball.
      auto chord_at = [&](double a) {
        return find_chord(space, Point(a * up), zhat, a * up_norm);
      };
      // No chord survives past offset 1/kappa (Euclidean reach of the ball).
      double a_lo = 0.0, a_hi = 1.0 / euclidean_lower_factor(space) + 1.0;
      {
        const Chord c0 = chord_at(a_lo);
        if (!c0.exists || c0.s_hi - c0.s_lo < eps) continue;
      }
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a_lo + a_hi);
        const Chord c = chord_at(m);
        (c.exists && c.s_hi - c.s_lo >= eps ? a_lo : a_hi) = m;
      }
      // Flush sub-chords at the critical offset and along a coarse scan
      // below it (flat faces keep full-length chords at every offset).
      for (int gi = 0; gi <= 16; ++gi) {
        const double a = a_lo * gi / 16.0;
        const Chord c = chord_at(a);
        if (!c.exists || c.s_hi - c.s_lo < eps) continue;
        const Point base = a * up;
        offer(base, c.s_lo);
        offer(base, c.s_hi - eps);
      }
    }
    if (best < tol) best = std::max(best, 0.0);
    rep.curve.entries.emplace_back(eps, best);
    rep.details.push_back(UredPairEstimate{eps, best, bx, by});
  }
  return rep;
}

}  // namespace rclab
