#pragma once

#include <cstddef>
#include <vector>

#include "rclab/solver.hpp"

namespace rclab {

struct ProductComponent {
  Space space;
  Subspace subspace;
  BoundedSet set;
};

/// l_p direct sum of finitely many components, each carrying its own
/// space, subspace, and bounded set. The product set is the Cartesian
/// product of the component sets; it is never materialized unless a
/// ground-truth cross-check asks for it.
struct ProductInstance {
  double p = 2.0;
  std::vector<ProductComponent> components;

  ProductInstance(double p, std::vector<ProductComponent> comps);

  std::size_t size() const { return components.size(); }
  int total_dim() const;
};

struct ProductPoint {
  std::vector<Point> blocks;
};

ProductPoint product_zero(const ProductInstance& inst);

/// Outer l_p sum of blockwise norms.
double product_norm(const ProductInstance& inst, const ProductPoint& x);
double product_dist(const ProductInstance& inst, const ProductPoint& x,
                    const ProductPoint& y);

/// r(x, F1 x ... x Fm) computed componentwise: the p-sum of the
/// blockwise farthest radii.
double product_farthest_radius(const ProductInstance& inst,
                               const ProductPoint& x);

struct ProductSolution {
  double radius = 0.0;
  std::vector<CenterSolution> component_solutions;
};

/// Solves every component restricted center problem and combines the
/// radii via the p-sum identity.
ProductSolution product_restricted_radius(const ProductInstance& inst,
                                          double tol = 1e-6);

/// Best center as the product of component centers, plus the Cartesian
/// product of the component near-minimizer clouds (deterministically
/// thinned to the cap; truncated reports whether thinning happened).
struct ProductCenterCloud {
  double radius = 0.0;
  std::vector<CenterSolution> component_solutions;
  ProductPoint best;
  std::vector<ProductPoint> points;
  bool truncated = false;
};

ProductCenterCloud product_center(const ProductInstance& inst,
                                  double tol = 1e-6,
                                  std::size_t cap = 100000);

/// Distance from x to a Cartesian product of per-component clouds: the
/// p-sum of componentwise cloud distances (exact for product sets).
double dist_to_product_cloud(const ProductInstance& inst,
                             const ProductPoint& x,
                             const std::vector<BoundedSet>& clouds);

/// Hausdorff distance between Cartesian products given componentwise,
/// using the exact decomposition of both directed distances.
double product_hausdorff(const ProductInstance& inst,
                         const std::vector<BoundedSet>& A,
                         const std::vector<BoundedSet>& B);

// ---------------------------------------------------------------------
// Flattened (materialized) form: ground truth for the identities above.

/// Single normed space carrying the whole direct sum.
Space flatten_space(const ProductInstance& inst);
/// Block-diagonal subspace of the flattened space.
Subspace flatten_subspace(const ProductInstance& inst);
Point flatten_point(const ProductInstance& inst, const ProductPoint& x);
ProductPoint split_point(const ProductInstance& inst, const Point& x);

/// Cartesian product of the component sets as a flat set; refuses above
/// the cap. Point order is the odometer order of component indices with
/// the last component fastest.
BoundedSet materialize_product_set(const ProductInstance& inst,
                                   std::size_t cap = 10000);

struct DirectSolveResult {
  double radius = 0.0;
  ProductPoint minimizer;
  long iterations = 0;
};

/// Ground-truth solve directly in the product space: the generic engine
/// runs on the flattened subspace against the materialized set, with no
/// componentwise shortcut.
DirectSolveResult direct_product_solve(const ProductInstance& inst,
                                       double tol = 1e-6,
                                       std::size_t cap = 10000);

// ---------------------------------------------------------------------

/// Uniform tail bound for near-minimizing sequences: the smallest prefix
/// length j such that max over the sequence of sum_{i>j} ||y_i||^p stays
/// below eps^p. tails[j] holds that max for each prefix length.
struct TailMassReport {
  int j = 0;
  double max_tail = 0.0;
  bool holds = false;
  /// Farthest radii along the sequence are non-increasing (within 1e-9
  /// relative) — the regime the tail bound is stated for. Reported, not
  /// enforced.
  bool sequence_is_minimizing = true;
  std::vector<double> tails;
};

TailMassReport tail_mass_check(const ProductInstance& inst,
                               const std::vector<ProductPoint>& sequence,
                               double eps);

/// Componentwise semicontinuity transfer: for each perturbed tuple of
/// component sets, the product Hausdorff input distance and both
/// directed gaps between the product center clouds.
struct PerturbationReport {
  double input_hausdorff = 0.0;
  double lhsc_gap = 0.0;  // sup over Z(base) of distance to Z(perturbed)
  double uhsc_gap = 0.0;  // sup over Z(perturbed) of distance to Z(base)
};

std::vector<PerturbationReport> semicontinuity_transfer_probe(
    const ProductInstance& base,
    const std::vector<std::vector<BoundedSet>>& perturbations,
    double tol = 1e-6);

}  // namespace rclab
