#include "rclab/counterexamples.hpp"

#include <cmath>
#include <string>

namespace rclab {

UniformFailureInstance build_p2_failure(int n, int m, double p) {
  if (n < 1) throw ValidationError("block index n must be >= 1");
  if (m < n) throw ValidationError("truncation length m must be >= n");
  const double pn = 1.0 + 1.0 / n;
  const double scale = std::pow(2.0, 1.0 / pn);  // l_{p_n} norm of (1,1,0)

  std::vector<ProductComponent> comps;
  comps.reserve(m);
  for (int i = 1; i <= m; ++i) {
    const Space sp(3, NormSpec::Lq(1.0 + 1.0 / i));
    Point e1 = Point::Zero(3), e2 = Point::Zero(3);
    e1[0] = 1.0;
    e2[1] = 1.0;
    const Subspace plane(sp, {e1, e2});
    std::vector<Point> pts;
    if (i == n) {
      Point u(3);
      u << 1.0 / scale, 1.0 / scale, 0.0;
      pts.push_back(u);
      pts.push_back(-u);
    } else {
      pts.push_back(Point::Zero(3));
    }
    comps.push_back(ProductComponent{sp, plane, BoundedSet(sp, pts)});
  }

  UniformFailureInstance out{n, m, p, ProductInstance(p, std::move(comps)),
                             ProductPoint{}, scale};
  out.witness = product_zero(out.instance);
  Point w(3);
  w << 1.0 / scale, -1.0 / scale, 0.0;
  out.witness.blocks[n - 1] = w;
  return out;
}

std::vector<UniformFailureRow> measure_p2_failure(int n_max, double p,
                                                  double tol) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  std::vector<UniformFailureRow> rows;
  rows.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const UniformFailureInstance inst = build_p2_failure(n, n, p);
    const ProductCenterCloud center =
        product_center(inst.instance, tol, /*cap=*/1);
    UniformFailureRow row;
    row.n = n;
    row.rad = center.radius;
    row.r_witness = product_farthest_radius(inst.instance, inst.witness);
    row.gap = row.r_witness - row.rad;
    // The centers are singletons here (every block norm is rotund), so
    // the distance is measured to the best center product.
    row.dist_to_center =
        product_dist(inst.instance, inst.witness, center.best);
    rows.push_back(row);
  }
  return rows;
}

ProjectionCollapseReport run_lhsc_failure(const std::vector<int>& k_list,
                                          double tol, int resolution) {
  const Space space(3, NormSpec::CNorm());
  Point dir(3);
  dir << 1.0, 1.0, 0.0;
  const Subspace line(space, {dir});

  Point anchor(3);
  anchor << 1.0, 0.0, 0.0;
  ProjectionCollapseReport rep{
      metric_projection(line, anchor, tol, resolution), {}};

  for (const int k : k_list) {
    if (k < 1) throw ValidationError("perturbation index k must be >= 1");
    Point xk(3);
    xk << 1.0, 0.0, 1.0 / k;
    const CenterSolution sol = metric_projection(line, xk, tol);
    ProjectionCollapseRow row;
    row.k = k;
    row.input_hausdorff = norm(space, xk - anchor);
    row.perturbed_radius = sol.radius;
    row.projection = sol.minimizers.points.front();
    row.cloud_size = sol.minimizers.size();
    row.lhsc_gap = directed_hausdorff(space, rep.anchor_solution.minimizers,
                                      sol.minimizers);
    row.uhsc_gap = directed_hausdorff(space, sol.minimizers,
                                      rep.anchor_solution.minimizers);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rclab
