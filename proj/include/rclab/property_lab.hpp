#pragma once

#include <optional>
#include <vector>

#include "rclab/solver.hpp"

namespace rclab {

enum class Normalization { none, rad_eq_1 };

/// Finite family of bounded sets over one space, the unit the uniform
/// collapse properties quantify over.
struct SetFamily {
  std::vector<BoundedSet> members;
  Normalization normalization = Normalization::none;

  explicit SetFamily(std::vector<BoundedSet> members,
                     Normalization normalization = Normalization::none);
};

/// Solves every member center problem; verifies the normalization flag
/// against the solved radii within 1e-6.
std::vector<CenterSolution> solve_family(const Subspace& V,
                                         const SetFamily& fam,
                                         double tol = 1e-6);

/// Uniform collapse modulus: largest delta (bisection, 30 steps, capped
/// by the smallest member radius) such that for every member the
/// delta-sublevel lies within eps of the member's center set.
ModulusCurve p2_modulus(const Subspace& V, const SetFamily& fam,
                        const std::vector<double>& eps_grid,
                        int resolution = 101, double tol = 1e-6);

/// Local variant anchored at a set: only members within Hausdorff
/// distance delta of the anchor must collapse at delta.
ModulusCurve lp2_modulus(const Subspace& V, const SetFamily& fam,
                         const BoundedSet& anchor,
                         const std::vector<double>& eps_grid,
                         int resolution = 101, double tol = 1e-6);

struct LocalUniformComparison {
  double eps = 0.0;
  std::vector<double> anchor_deltas;  // local modulus anchored at each member
  double min_anchor_delta = 0.0;
  double uniform_delta = 0.0;
};

/// Local modulus at every member as anchor versus the uniform modulus,
/// at one eps.
LocalUniformComparison local_vs_uniform_compare(const Subspace& V,
                                                const SetFamily& fam,
                                                double eps,
                                                int resolution = 101,
                                                double tol = 1e-6);

struct SemicontinuityRow {
  double input_hausdorff = 0.0;
  double lhsc_gap = 0.0;  // sup over Z(limit) of distance to Z(member)
  double uhsc_gap = 0.0;  // sup over Z(member) of distance to Z(limit)
};

/// For a sequence of sets whose last element is the limit: per earlier
/// element, its Hausdorff distance to the limit and both directed gaps
/// between the solved center clouds.
std::vector<SemicontinuityRow> semicontinuity_gap(
    const Subspace& V, const std::vector<BoundedSet>& sets, double tol = 1e-6,
    int cloud_resolution = 0);

struct QurResult {
  double delta_estimate = 0.0;
  /// Set when even the smallest probed delta fails: a subspace point v
  /// for which no admissible recentering w was found.
  std::optional<Point> witness;
};

/// Sampled test of quasi uniform rotundity with respect to Y: searches
/// for delta such that for every probed v in Y the intersection
/// B[0,1] ∩ B[v,1-delta] fits inside B[w,1-delta] for some w in Y with
/// ||w|| <= eps.
QurResult qur_probe(const Space& space, const Subspace& Y, double eps,
                    int v_samples = 60, const SamplerCfg& cfg = {});

struct UredPairEstimate {
  double eps = 0.0;
  double modulus = 0.0;
  Point x;
  Point y;  // worst pair found: ||x-y|| >= eps along the direction
};

struct UredReport {
  ModulusCurve curve;  // kind URED
  std::vector<UredPairEstimate> details;
};

/// Directional rotundity modulus: estimates
/// inf { 1 - ||(x+y)/2|| : ||x||,||y|| <= 1, x - y || z, ||x-y|| >= eps }
/// over unit-ball chords parallel to z. A zero value at the sampling
/// resolution signals a flat face containing the direction.
UredReport ured_probe(const Space& space, const Point& z,
                      const std::vector<double>& eps_grid, int samples = 48,
                      double tol = 1e-9);

}  // namespace rclab
