#include "rclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rclab {

BoundedSet::BoundedSet(Space space_, std::vector<Point> pts)
    : space(std::move(space_)) {
  if (pts.empty()) {
    throw ValidationError("bounded set must contain at least one point");
  }
  points.reserve(pts.size());
  for (auto& p : pts) {
    if (p.size() != space.dim) {
      throw ValidationError("set point dimension does not match space");
    }
    if (!p.allFinite()) {
      throw ValidationError("set point has non-finite coordinates");
    }
    bool dup = false;
    for (const auto& kept : points) {
      if (kept == p) {
        dup = true;
        break;
      }
    }
    if (!dup) points.push_back(std::move(p));
  }
}

Subspace::Subspace(Space space_, const std::vector<Point>& basis_vectors)
    : space(std::move(space_)) {
  const int k = static_cast<int>(basis_vectors.size());
  basis.resize(space.dim, k);
  for (int j = 0; j < k; ++j) {
    if (basis_vectors[j].size() != space.dim) {
      throw ValidationError("basis vector dimension does not match space");
    }
    if (!basis_vectors[j].allFinite()) {
      throw ValidationError("basis vector has non-finite coordinates");
    }
    basis.col(j) = basis_vectors[j];
  }
  if (k == 0) {
    onb.resize(space.dim, 0);
    return;
  }
  if (k > space.dim) {
    throw ValidationError("more basis vectors than the space dimension");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0)) {
    throw ValidationError(
        "basis vectors are not linearly independent (singular value ratio "
        "below 1e-10)");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  onb = qr.householderQ() * Eigen::MatrixXd::Identity(space.dim, k);
}

Point Subspace::from_coeffs(const Eigen::VectorXd& c) const {
  if (c.size() != onb.cols()) {
    throw ValidationError("coefficient vector has wrong length");
  }
  if (onb.cols() == 0) return Point::Zero(space.dim);
  return onb * c;
}

Eigen::VectorXd Subspace::coeffs_of(const Point& v) const {
  return onb.transpose() * v;
}

double Subspace::span_residual(const Point& x) const {
  if (onb.cols() == 0) return x.norm();
  return (x - onb * (onb.transpose() * x)).norm();
}

double farthest_radius(const Space& space, const Point& x,
                       const BoundedSet& F) {
  if (F.space != space) {
    throw ValidationError("set does not live in the given space");
  }
  double r = 0.0;
  for (const auto& a : F.points) r = std::max(r, norm(space, x - a));
  return r;
}

double dist_to_points(const Space& space, const Point& x,
                      const std::vector<Point>& points) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& a : points) d = std::min(d, norm(space, x - a));
  return d;
}

double dist_to_set(const Space& space, const Point& x, const BoundedSet& S) {
  if (S.space != space) {
    throw ValidationError("set does not live in the given space");
  }
  return dist_to_points(space, x, S.points);
}

double directed_hausdorff(const Space& space, const BoundedSet& A,
                          const BoundedSet& B) {
  double h = 0.0;
  for (const auto& a : A.points) {
    h = std::max(h, dist_to_set(space, a, B));
  }
  return h;
}

double hausdorff(const BoundedSet& A, const BoundedSet& B) {
  if (A.space != B.space) {
    throw ValidationError("hausdorff distance requires a common space");
  }
  return std::max(directed_hausdorff(A.space, A, B),
                  directed_hausdorff(A.space, B, A));
}

BoundedSet scale_set(const BoundedSet& F, double alpha) {
  std::vector<Point> pts;
  pts.reserve(F.points.size());
  for (const auto& p : F.points) pts.push_back(alpha * p);
  return BoundedSet(F.space, std::move(pts));
}

BoundedSet translate_set(const BoundedSet& F, const Point& t) {
  if (t.size() != F.space.dim) {
    throw ValidationError("translation vector dimension does not match space");
  }
  std::vector<Point> pts;
  pts.reserve(F.points.size());
  for (const auto& p : F.points) pts.push_back(p + t);
  return BoundedSet(F.space, std::move(pts));
}

std::vector<Point> ball_intersection_samples(const Space& space,
                                             const Point& c1, double r1,
                                             const Point& c2, double r2,
                                             const SamplerCfg& cfg) {
  if (c1.size() != space.dim || c2.size() != space.dim) {
    throw ValidationError("ball center dimension does not match space");
  }
  if (r1 < 0.0 || r2 < 0.0) {
    throw ValidationError("ball radius must be nonnegative");
  }
  const int ppa = cfg.points_per_axis;
  if (ppa < 2) throw ValidationError("points_per_axis must be >= 2");
  double total = 1.0;
  for (int i = 0; i < space.dim; ++i) total *= ppa;
  if (total > 5e6) {
    throw UnsupportedError("ball sampling grid exceeds 5e6 points");
  }

  // Both supported norm families dominate the max norm, so the cube
  // [c1 - r1, c1 + r1]^dim contains B[c1, r1].
  std::vector<Point> out;
  std::vector<int> idx(space.dim, 0);
  Point s(space.dim);
  const double step = ppa > 1 ? 2.0 * r1 / (ppa - 1) : 0.0;
  while (true) {
    for (int i = 0; i < space.dim; ++i) {
      s[i] = c1[i] - r1 + step * idx[i];
    }
    if (norm(space, s - c1) <= r1 && norm(space, s - c2) <= r2) {
      out.push_back(s);
    }
    int d = space.dim - 1;
    while (d >= 0 && ++idx[d] == ppa) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

BallInclusionReport ball_inclusion(const Space& space, const Point& c1,
                                   double r1, const Point& c2, double r2,
                                   const Point& c3, double r3,
                                   const SamplerCfg& cfg) {
  if (c3.size() != space.dim) {
    throw ValidationError("ball center dimension does not match space");
  }
  BallInclusionReport rep;
  const auto samples = ball_intersection_samples(space, c1, r1, c2, r2, cfg);
  rep.samples_in_intersection = static_cast<long>(samples.size());
  if (samples.empty()) {
    rep.empty_intersection = true;
    rep.holds = true;  // vacuously
    return rep;
  }
  for (const auto& s : samples) {
    const double excess = norm(space, s - c3) - r3;
    if (excess > rep.worst_violation) {
      rep.worst_violation = excess;
      rep.witness = s;
    }
  }
  rep.holds = rep.worst_violation <= 1e-12;
  if (!rep.holds && !rep.witness) rep.witness = samples.front();
  return rep;
}

}  // namespace rclab
