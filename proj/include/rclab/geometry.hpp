#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rclab/space.hpp"

namespace rclab {

/// Finite nonempty set of points in a space. Exact duplicate points are
/// removed on construction; order of first occurrence is kept.
struct BoundedSet {
  Space space;
  std::vector<Point> points;

  BoundedSet(Space space, std::vector<Point> points);

  std::size_t size() const { return points.size(); }
};

/// Linear subspace given by a finite (possibly empty) list of basis
/// vectors. Vectors must be linearly independent: the smallest singular
/// value of the basis matrix must be >= 1e-10 times the largest.
///
/// Internally an orthonormal basis of the span is kept; all solver work
/// happens in those coordinates, so coefficient Euclidean geometry
/// matches point Euclidean geometry.
struct Subspace {
  Space space;
  Eigen::MatrixXd basis;  // dim x k, the vectors as given
  Eigen::MatrixXd onb;    // dim x k, orthonormal basis of the same span

  Subspace(Space space, const std::vector<Point>& basis_vectors);

  int subspace_dim() const { return static_cast<int>(onb.cols()); }

  Point from_coeffs(const Eigen::VectorXd& c) const;
  Eigen::VectorXd coeffs_of(const Point& v) const;  // valid for v in the span

  /// Euclidean distance from x to the span.
  double span_residual(const Point& x) const;
};

/// r(x, F) = max_{a in F} ||x - a||.
double farthest_radius(const Space& space, const Point& x,
                       const BoundedSet& F);

/// min_{a in S} ||x - a||.
double dist_to_set(const Space& space, const Point& x, const BoundedSet& S);
double dist_to_points(const Space& space, const Point& x,
                      const std::vector<Point>& points);

/// sup_{a in A} d(a, B), the directed Hausdorff distance.
double directed_hausdorff(const Space& space, const BoundedSet& A,
                          const BoundedSet& B);

/// Hausdorff distance between two finite sets in the same space.
double hausdorff(const BoundedSet& A, const BoundedSet& B);

/// {alpha * x : x in F}.
BoundedSet scale_set(const BoundedSet& F, double alpha);
/// {x + t : x in F}.
BoundedSet translate_set(const BoundedSet& F, const Point& t);

struct SamplerCfg {
  int points_per_axis = 41;
};

struct BallInclusionReport {
  bool holds = true;
  bool empty_intersection = false;
  double worst_violation = 0.0;  // max over samples of ||s - c3|| - r3
  std::optional<Point> witness;  // a sample realizing the worst violation
  long samples_in_intersection = 0;
};

/// Deterministic grid samples of B[c1,r1] intersected with B[c2,r2].
/// The grid spans the bounding box of B[c1,r1].
std::vector<Point> ball_intersection_samples(const Space& space,
                                             const Point& c1, double r1,
                                             const Point& c2, double r2,
                                             const SamplerCfg& cfg = {});

/// Sampled check of B[c1,r1] ∩ B[c2,r2] ⊆ B[c3,r3].
BallInclusionReport ball_inclusion(const Space& space, const Point& c1,
                                   double r1, const Point& c2, double r2,
                                   const Point& c3, double r3,
                                   const SamplerCfg& cfg = {});

}  // namespace rclab
