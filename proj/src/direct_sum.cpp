#include "rclab/direct_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rclab {

namespace {

// Outer l_p sum with the same overflow guard as the norm code.
double p_sum(const std::vector<double>& vals, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : vals) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : vals) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

void check_point(const ProductInstance& inst, const ProductPoint& x) {
  if (x.blocks.size() != inst.components.size()) {
    throw ValidationError("product point has wrong number of blocks");
  }
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    if (x.blocks[i].size() != inst.components[i].space.dim) {
      throw ValidationError("product point block " + std::to_string(i) +
                            " has wrong dimension");
    }
  }
}

}  // namespace

ProductInstance::ProductInstance(double p_, std::vector<ProductComponent> comps)
    : p(p_), components(std::move(comps)) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ValidationError("product exponent must be finite and >= 1");
  }
  if (components.empty()) {
    throw ValidationError("product instance needs at least one component");
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (c.subspace.space != c.space || c.set.space != c.space) {
      throw ValidationError("component " + std::to_string(i) +
                            " mixes different spaces");
    }
  }
}

int ProductInstance::total_dim() const {
  int d = 0;
  for (const auto& c : components) d += c.space.dim;
  return d;
}

ProductPoint product_zero(const ProductInstance& inst) {
  ProductPoint z;
  z.blocks.reserve(inst.size());
  for (const auto& c : inst.components) {
    z.blocks.push_back(Point::Zero(c.space.dim));
  }
  return z;
}

double product_norm(const ProductInstance& inst, const ProductPoint& x) {
  check_point(inst, x);
  std::vector<double> vals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    vals[i] = norm(inst.components[i].space, x.blocks[i]);
  }
  return p_sum(vals, inst.p);
}

double product_dist(const ProductInstance& inst, const ProductPoint& x,
                    const ProductPoint& y) {
  check_point(inst, x);
  check_point(inst, y);
  std::vector<double> vals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    vals[i] = norm(inst.components[i].space, x.blocks[i] - y.blocks[i]);
  }
  return p_sum(vals, inst.p);
}

double product_farthest_radius(const ProductInstance& inst,
                               const ProductPoint& x) {
  check_point(inst, x);
  // sup over the Cartesian product decomposes blockwise, so the farthest
  // radius is the p-sum of blockwise farthest radii.
  std::vector<double> vals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    vals[i] =
        farthest_radius(inst.components[i].space, x.blocks[i],
                        inst.components[i].set);
  }
  return p_sum(vals, inst.p);
}

ProductSolution product_restricted_radius(const ProductInstance& inst,
                                          double tol) {
  ProductSolution out;
  std::vector<double> vals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out.component_solutions.push_back(restricted_radius(
        inst.components[i].subspace, inst.components[i].set, tol));
    vals[i] = out.component_solutions.back().radius;
  }
  out.radius = p_sum(vals, inst.p);
  return out;
}

ProductCenterCloud product_center(const ProductInstance& inst, double tol,
                                  std::size_t cap) {
  if (cap < 1) throw ValidationError("product center cap must be >= 1");
  ProductCenterCloud out;
  ProductSolution sol = product_restricted_radius(inst, tol);
  out.radius = sol.radius;
  out.component_solutions = std::move(sol.component_solutions);

  out.best.blocks.reserve(inst.size());
  for (const auto& cs : out.component_solutions) {
    out.best.blocks.push_back(cs.minimizers.points.front());
  }

  // Thin the component clouds (keeping first points, which include the
  // best one) until the Cartesian product fits under the cap.
  std::vector<std::vector<Point>> clouds;
  clouds.reserve(inst.size());
  for (const auto& cs : out.component_solutions) {
    clouds.push_back(cs.minimizers.points);
  }
  auto total = [&]() {
    double t = 1.0;
    for (const auto& c : clouds) t *= static_cast<double>(c.size());
    return t;
  };
  while (total() > static_cast<double>(cap)) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < clouds.size(); ++i) {
      if (clouds[i].size() > clouds[big].size()) big = i;
    }
    if (clouds[big].size() <= 1) break;
    std::vector<Point> kept;
    kept.reserve((clouds[big].size() + 1) / 2);
    for (std::size_t j = 0; j < clouds[big].size(); j += 2) {
      kept.push_back(clouds[big][j]);
    }
    clouds[big] = std::move(kept);
    out.truncated = true;
  }

  std::vector<std::size_t> idx(inst.size(), 0);
  while (true) {
    ProductPoint pt;
    pt.blocks.reserve(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
      pt.blocks.push_back(clouds[i][idx[i]]);
    }
    out.points.push_back(std::move(pt));
    int d = static_cast<int>(inst.size()) - 1;
    while (d >= 0 && ++idx[d] == clouds[d].size()) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

double dist_to_product_cloud(const ProductInstance& inst,
                             const ProductPoint& x,
                             const std::vector<BoundedSet>& clouds) {
  check_point(inst, x);
  if (clouds.size() != inst.size()) {
    throw ValidationError("cloud count does not match component count");
  }
  std::vector<double> vals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    vals[i] = dist_to_set(inst.components[i].space, x.blocks[i], clouds[i]);
  }
  return p_sum(vals, inst.p);
}

double product_hausdorff(const ProductInstance& inst,
                         const std::vector<BoundedSet>& A,
                         const std::vector<BoundedSet>& B) {
  if (A.size() != inst.size() || B.size() != inst.size()) {
    throw ValidationError("set count does not match component count");
  }
  std::vector<double> ab(inst.size()), ba(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Space& sp = inst.components[i].space;
    if (A[i].space != sp || B[i].space != sp) {
      throw ValidationError("component set lives in the wrong space");
    }
    ab[i] = directed_hausdorff(sp, A[i], B[i]);
    ba[i] = directed_hausdorff(sp, B[i], A[i]);
  }
  return std::max(p_sum(ab, inst.p), p_sum(ba, inst.p));
}

Space flatten_space(const ProductInstance& inst) {
  std::vector<std::pair<int, NormSpec>> blocks;
  blocks.reserve(inst.size());
  for (const auto& c : inst.components) {
    blocks.emplace_back(c.space.dim, c.space.norm_spec);
  }
  return Space(inst.total_dim(), NormSpec::BlockP(inst.p, std::move(blocks)));
}

Subspace flatten_subspace(const ProductInstance& inst) {
  const Space flat = flatten_space(inst);
  std::vector<Point> basis;
  int offset = 0;
  for (const auto& c : inst.components) {
    for (int j = 0; j < c.subspace.subspace_dim(); ++j) {
      Point v = Point::Zero(flat.dim);
      v.segment(offset, c.space.dim) = c.subspace.onb.col(j);
      basis.push_back(std::move(v));
    }
    offset += c.space.dim;
  }
  return Subspace(flat, basis);
}

Point flatten_point(const ProductInstance& inst, const ProductPoint& x) {
  check_point(inst, x);
  Point out(inst.total_dim());
  int offset = 0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out.segment(offset, x.blocks[i].size()) = x.blocks[i];
    offset += static_cast<int>(x.blocks[i].size());
  }
  return out;
}

ProductPoint split_point(const ProductInstance& inst, const Point& x) {
  if (x.size() != inst.total_dim()) {
    throw ValidationError("flat point has wrong dimension");
  }
  ProductPoint out;
  int offset = 0;
  for (const auto& c : inst.components) {
    out.blocks.push_back(x.segment(offset, c.space.dim));
    offset += c.space.dim;
  }
  return out;
}

BoundedSet materialize_product_set(const ProductInstance& inst,
                                   std::size_t cap) {
  double total = 1.0;
  for (const auto& c : inst.components) {
    total *= static_cast<double>(c.set.size());
  }
  if (total > static_cast<double>(cap)) {
    throw UnsupportedError(
        "materialized product set would exceed the cap of " +
        std::to_string(cap) + " points");
  }
  const Space flat = flatten_space(inst);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> idx(inst.size(), 0);
  while (true) {
    Point v(flat.dim);
    int offset = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const Point& a = inst.components[i].set.points[idx[i]];
      v.segment(offset, a.size()) = a;
      offset += static_cast<int>(a.size());
    }
    pts.push_back(std::move(v));
    int d = static_cast<int>(inst.size()) - 1;
    while (d >= 0 && ++idx[d] == inst.components[d].set.size()) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return BoundedSet(flat, std::move(pts));
}

DirectSolveResult direct_product_solve(const ProductInstance& inst, double tol,
                                       std::size_t cap) {
  const Subspace flat_v = flatten_subspace(inst);
  const BoundedSet flat_f = materialize_product_set(inst, cap);
  const CenterSolution sol = restricted_radius(flat_v, flat_f, tol);
  DirectSolveResult out;
  out.radius = sol.radius;
  out.minimizer = split_point(inst, sol.minimizers.points.front());
  out.iterations = sol.iterations;
  return out;
}

TailMassReport tail_mass_check(const ProductInstance& inst,
                               const std::vector<ProductPoint>& sequence,
                               double eps) {
  if (sequence.empty()) {
    throw ValidationError("tail mass check needs a nonempty sequence");
  }
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  const int m = static_cast<int>(inst.size());
  for (const auto& y : sequence) {
    check_point(inst, y);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double res = inst.components[i].subspace.span_residual(y.blocks[i]);
      if (res > 1e-8 * (1.0 + y.blocks[i].norm())) {
        throw ValidationError(
            "sequence point lies outside the product subspace");
      }
    }
  }

  TailMassReport rep;
  rep.tails.assign(m + 1, 0.0);
  for (const auto& y : sequence) {
    // Tail p-th power masses for every prefix length at once.
    std::vector<double> pw(m);
    for (int i = 0; i < m; ++i) {
      pw[i] = std::pow(norm(inst.components[i].space, y.blocks[i]), inst.p);
    }
    double tail = 0.0;
    for (int j = m; j >= 0; --j) {
      rep.tails[j] = std::max(rep.tails[j], tail);
      if (j > 0) tail += pw[j - 1];
    }
  }
  const double cut = std::pow(eps, inst.p);
  int j = m;
  for (int cand = 0; cand <= m; ++cand) {
    if (rep.tails[cand] < cut) {
      j = cand;
      break;
    }
  }
  rep.j = j;
  rep.max_tail = rep.tails[j];
  rep.holds = j < m;

  double prev = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const double r = product_farthest_radius(inst, sequence[t]);
    if (t == 0) scale = std::max(1.0, r);
    if (r > prev + 1e-9 * scale) rep.sequence_is_minimizing = false;
    prev = r;
  }
  return rep;
}

std::vector<PerturbationReport> semicontinuity_transfer_probe(
    const ProductInstance& base,
    const std::vector<std::vector<BoundedSet>>& perturbations, double tol) {
  const ProductSolution base_sol = product_restricted_radius(base, tol);
  std::vector<BoundedSet> base_sets;
  std::vector<BoundedSet> base_clouds;
  for (std::size_t i = 0; i < base.size(); ++i) {
    base_sets.push_back(base.components[i].set);
    base_clouds.push_back(base_sol.component_solutions[i].minimizers);
  }

  std::vector<PerturbationReport> out;
  out.reserve(perturbations.size());
  for (const auto& pert : perturbations) {
    if (pert.size() != base.size()) {
      throw ValidationError("perturbation must provide one set per component");
    }
    std::vector<ProductComponent> comps;
    comps.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      comps.push_back(ProductComponent{base.components[i].space,
                                       base.components[i].subspace, pert[i]});
    }
    const ProductInstance pinst(base.p, std::move(comps));
    const ProductSolution psol = product_restricted_radius(pinst, tol);

    std::vector<double> lh(base.size()), uh(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Space& sp = base.components[i].space;
      const BoundedSet& zb = base_clouds[i];
      const BoundedSet& zp = psol.component_solutions[i].minimizers;
      lh[i] = directed_hausdorff(sp, zb, zp);
      uh[i] = directed_hausdorff(sp, zp, zb);
    }
    PerturbationReport rep;
    rep.input_hausdorff = product_hausdorff(base, base_sets, pert);
    // sup over a product of componentwise distances splits into the
    // p-sum of componentwise sups.
    rep.lhsc_gap = p_sum(lh, base.p);
    rep.uhsc_gap = p_sum(uh, base.p);
    out.push_back(rep);
  }
  return out;
}

}  // namespace rclab
