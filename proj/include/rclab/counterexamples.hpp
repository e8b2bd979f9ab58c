#pragma once

#include <vector>

#include "rclab/direct_sum.hpp"

namespace rclab {

/// Product-space family on which no uniform collapse rate exists: block
/// i carries (R^3, l_{p_i}) with p_i = 1 + 1/i and the plane spanned by
/// e1, e2 as its subspace. The n-th member set is {+u, -u} in block n
/// (u the l_{p_n}-normalized (1,1,0)) and {0} elsewhere, so truncating
/// at m = n blocks is exact: every discarded block contributes the
/// singleton {0} with radius 0.
struct UniformFailureInstance {
  int n = 1;        // active block
  int m = 1;        // number of blocks kept (m >= n)
  double p = 2.0;   // outer exponent
  ProductInstance instance;
  ProductPoint witness;      // scaled (1,-1,0) in block n, zero elsewhere
  double block_scale = 1.0;  // l_{p_n} norm of (1,1,0)
};

UniformFailureInstance build_p2_failure(int n, int m, double p);

struct UniformFailureRow {
  int n = 0;
  double rad = 0.0;             // solved restricted radius (exactly 1)
  double r_witness = 0.0;       // farthest radius at the witness
  double gap = 0.0;             // r_witness - rad, the sublevel excess
  double dist_to_center = 0.0;  // distance from witness to the center
};

/// Measures, for n = 1..n_max, how a sublevel excess shrinking to zero
/// coexists with the witness staying at distance one from the center.
std::vector<UniformFailureRow> measure_p2_failure(int n_max, double p,
                                                  double tol = 1e-6);

/// Nearest-point map discontinuity on (R^3, |x1| + sqrt(x2^2 + x3^2))
/// with the line through (1,1,0) as the subspace: the anchor (1,0,0)
/// projects onto a whole segment, while every perturbed point
/// (1,0,1/k) projects onto the single far end of that segment.
struct ProjectionCollapseRow {
  int k = 0;
  double input_hausdorff = 0.0;  // distance of (1,0,1/k) from the anchor
  double perturbed_radius = 0.0;
  Point projection;              // best projection of the perturbed point
  std::size_t cloud_size = 0;    // perturbed near-minimizer cloud size
  double lhsc_gap = 0.0;  // sup over anchor centers of dist to perturbed
  double uhsc_gap = 0.0;  // sup over perturbed centers of dist to anchor
};

struct ProjectionCollapseReport {
  CenterSolution anchor_solution;  // cloud covering the anchor segment
  std::vector<ProjectionCollapseRow> rows;
};

ProjectionCollapseReport run_lhsc_failure(const std::vector<int>& k_list,
                                          double tol = 1e-6,
                                          int resolution = 401);

}  // namespace rclab
