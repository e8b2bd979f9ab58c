// Acceptance battery: ten pass/fail criteria covering the decomposition
// identities, the solver's counterexample reproductions, the collapse
// moduli, and byte-level reproducibility. Each criterion prints one line;
// the process exit code is the number of failed criteria.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rclab/counterexamples.hpp"
#include "rclab/csv.hpp"
#include "rclab/property_lab.hpp"
#include "testutil.hpp"

using namespace rclab;
using testutil::ProductShape;

namespace {

struct Criterion {
  int index = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::string artifact;  // deterministic CSV, compared across reruns
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Criterion make_criterion(int index, std::string title) {
  Criterion c;
  c.index = index;
  c.title = std::move(title);
  return c;
}

std::string fmt_detail(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

Point pt2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

Point pt3(double a, double b, double c) {
  Point p(3);
  p << a, b, c;
  return p;
}

// ---------------------------------------------------------------- 1

Criterion criterion1() {
  Criterion c = make_criterion(1, "componentwise farthest radii match materialized products");
  const auto t0 = Clock::now();
  Rng rng(101);
  ProductShape shape;  // up to 4 components, dim <= 3, 1..5 points each
  CsvTable csv({"instance", "probe", "componentwise", "materialized",
                "abs_gap"});
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ProductInstance inst = testutil::random_product(rng, shape);
    const Space flat = flatten_space(inst);
    const BoundedSet flat_set = materialize_product_set(inst);
    std::vector<ProductPoint> probes;
    probes.push_back(product_zero(inst));
    for (int t = 0; t < 3; ++t) {
      probes.push_back(testutil::random_product_point(rng, inst, 2.0));
    }
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      const double comp = product_farthest_radius(inst, probes[pi]);
      const double mat =
          farthest_radius(flat, flatten_point(inst, probes[pi]), flat_set);
      const double gap = std::abs(comp - mat);
      worst = std::max(worst, gap);
      csv.add_row({CsvTable::fmt(i), CsvTable::fmt(static_cast<int>(pi)),
                   CsvTable::fmt(comp), CsvTable::fmt(mat),
                   CsvTable::fmt(gap)});
    }
  }
  const double elapsed = seconds_since(t0);
  c.pass = worst <= 1e-12 && elapsed < 5.0;
  c.detail = fmt_detail("100 instances, 400 probes, max gap %.3g, %.2fs",
                        worst, elapsed);
  c.artifact = csv.str();
  return c;
}

// -------------------------------------------------------------- 2, 3

void criteria23(Criterion& c2, Criterion& c3) {
  c2 = make_criterion(2, "componentwise radii match direct product-space solves");
  c3 = make_criterion(3, "product centers match direct minimizers when rotund");
  const auto t0 = Clock::now();
  Rng rng(202);
  ProductShape shape;
  shape.max_components = 3;
  shape.max_points = 3;
  shape.max_subspace_dim = 2;
  CsvTable radii({"instance", "rotund", "componentwise", "direct",
                  "abs_gap"});
  CsvTable centers({"instance", "minimizer_distance"});
  double worst_radius = 0.0;
  double worst_dist = 0.0;
  for (int i = 0; i < 30; ++i) {
    shape.rotund_only = (i % 2 == 0);
    const ProductInstance inst = testutil::random_product(rng, shape);
    const ProductCenterCloud comp = product_center(inst, 1e-6, 1);
    const DirectSolveResult direct = direct_product_solve(inst, 1e-6);
    const double gap = std::abs(comp.radius - direct.radius);
    worst_radius = std::max(worst_radius, gap);
    radii.add_row({CsvTable::fmt(i), CsvTable::fmt(shape.rotund_only ? 1 : 0),
                   CsvTable::fmt(comp.radius), CsvTable::fmt(direct.radius),
                   CsvTable::fmt(gap)});
    if (shape.rotund_only) {
      const double mdist = product_dist(inst, comp.best, direct.minimizer);
      worst_dist = std::max(worst_dist, mdist);
      centers.add_row({CsvTable::fmt(i), CsvTable::fmt(mdist)});
    }
  }
  const double elapsed = seconds_since(t0);
  c2.pass = worst_radius <= 5e-4 && elapsed < 60.0;
  c2.detail = fmt_detail("30 instances, max radius gap %.3g, %.2fs",
                         worst_radius, elapsed);
  c2.artifact = radii.str();
  c3.pass = worst_dist <= 5e-4;
  c3.detail = fmt_detail("15 rotund instances, max minimizer distance %.3g",
                         worst_dist);
  c3.artifact = centers.str();
}

// ---------------------------------------------------------------- 4

Criterion criterion4() {
  Criterion c = make_criterion(4, "witness gap vanishes while its center distance stays one");
  const auto t0 = Clock::now();
  const int n_max = 40;
  const std::vector<UniformFailureRow> rows = measure_p2_failure(n_max, 2.0);
  CsvTable csv({"n", "rad", "r_wn", "gap", "dist_to_center"});
  bool rows_ok = static_cast<int>(rows.size()) == n_max;
  double worst_rad = 0.0, worst_rwn = 0.0, worst_dist = 0.0;
  bool small_gap_near_center = false;
  for (const UniformFailureRow& row : rows) {
    worst_rad = std::max(worst_rad, std::abs(row.rad - 1.0));
    const double expected = std::pow(2.0, 1.0 / (row.n + 1));
    worst_rwn = std::max(worst_rwn, std::abs(row.r_witness - expected));
    worst_dist = std::max(worst_dist, std::abs(row.dist_to_center - 1.0));
    if (row.n <= 14 && row.gap < 0.05 && row.dist_to_center >= 1.0 - 1e-6) {
      small_gap_near_center = true;
    }
    csv.add_row({CsvTable::fmt(row.n), CsvTable::fmt(row.rad),
                 CsvTable::fmt(row.r_witness), CsvTable::fmt(row.gap),
                 CsvTable::fmt(row.dist_to_center)});
  }
  const double elapsed = seconds_since(t0);
  c.pass = rows_ok && worst_rad <= 1e-6 && worst_rwn <= 1e-9 &&
           worst_dist <= 1e-6 && small_gap_near_center && elapsed < 30.0;
  c.detail = fmt_detail(
      "n=1..%d: |rad-1|<=%.2g, |r_wn-2^{1/(n+1)}|<=%.2g, |dist-1|<=%.2g, "
      "gap<0.05 reached by n<=14: %s, %.2fs",
      n_max, worst_rad, worst_rwn, worst_dist,
      small_gap_near_center ? "yes" : "no", elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------- 5

Criterion criterion5() {
  Criterion c = make_criterion(5, "projection segment covered; perturbed projections jump");
  const auto t0 = Clock::now();
  const std::vector<int> ks = {1, 10, 100};
  const ProjectionCollapseReport rep = run_lhsc_failure(ks, 1e-6, 401);
  const Space space(3, NormSpec::CNorm());

  std::vector<Point> seg;
  const int refs = 2001;
  seg.reserve(refs);
  for (int j = 0; j < refs; ++j) {
    const double t = static_cast<double>(j) / (refs - 1);
    seg.push_back(pt3(t, t, 0.0));
  }
  const BoundedSet segment(space, seg);
  const double cover =
      std::max(directed_hausdorff(space, segment,
                                  rep.anchor_solution.minimizers),
               directed_hausdorff(space, rep.anchor_solution.minimizers,
                                  segment));

  CsvTable csv({"k", "d_anchor", "proj_k0", "proj_k1", "proj_k2",
                "lhsc_gap", "uhsc_gap"});
  const Point end = pt3(1, 1, 0);
  double worst_proj = 0.0;
  bool gaps_ok = true;
  for (const ProjectionCollapseRow& row : rep.rows) {
    worst_proj = std::max(
        worst_proj, norm(space, Point(row.projection - end)));
    gaps_ok = gaps_ok && row.lhsc_gap >= 1.95 && row.lhsc_gap <= 2.05;
    csv.add_row({CsvTable::fmt(row.k), CsvTable::fmt(row.input_hausdorff),
                 CsvTable::fmt(row.projection[0]),
                 CsvTable::fmt(row.projection[1]),
                 CsvTable::fmt(row.projection[2]),
                 CsvTable::fmt(row.lhsc_gap), CsvTable::fmt(row.uhsc_gap)});
  }
  const double elapsed = seconds_since(t0);
  c.pass = cover <= 0.02 && worst_proj <= 0.02 && gaps_ok && elapsed < 10.0;
  c.detail = fmt_detail(
      "segment cover %.4g, max projection offset %.3g, jump gaps in "
      "[1.95,2.05]: %s, %.2fs",
      cover, worst_proj, gaps_ok ? "yes" : "no", elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------- 6

Criterion criterion6() {
  Criterion c = make_criterion(6, "sublevel membership is invariant under rescaling");
  const auto t0 = Clock::now();
  Rng rng(606);
  CsvTable csv({"instance", "alpha", "checks", "decisive", "violations"});
  long violations_total = 0;
  struct Drawn {
    Space space;
    Subspace V;
    BoundedSet F;
    CenterSolution sol;
  };
  for (int i = 0; i < 20; ++i) {
    auto draw = [&rng]() -> Drawn {
      while (true) {
        Space space = testutil::random_space(rng, 3);
        Subspace V = testutil::random_subspace(rng, space);
        BoundedSet F = testutil::random_set(rng, space, 2, 5);
        CenterSolution sol = restricted_radius(V, F);
        if (sol.radius >= 0.2) return Drawn{space, V, F, sol};
      }
    };
    const Drawn d = draw();
    const double alpha = d.sol.radius;
    const Point w = d.sol.minimizers.points.front();
    const BoundedSet G = scale_set(translate_set(d.F, Point(-w)), 1.0 / alpha);

    long violations = 0, decisive = 0;
    const int k = d.V.subspace_dim();
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd coeffs(k);
      for (int j = 0; j < k; ++j) coeffs[j] = rng.uniform(-2.0, 2.0);
      const Point v = w + alpha * d.V.from_coeffs(coeffs);
      const double eta = rng.uniform(0.0, 0.5);
      // v belongs to the (alpha*eta)-sublevel of F at level alpha*(1+eta)
      // exactly when u = (v-w)/alpha belongs to the eta-sublevel of the
      // normalized set G at level 1+eta.
      const double m_f = alpha * (1.0 + eta) - farthest_radius(d.space, v, d.F);
      const Point u = (v - w) / alpha;
      const double m_g = (1.0 + eta) - farthest_radius(d.space, u, G);
      const bool in_f = m_f >= 0.0;
      const bool in_g = m_g >= 0.0;
      const double margin = std::min(std::abs(m_f), alpha * std::abs(m_g));
      if (margin > 1e-9) {
        ++decisive;
        if (in_f != in_g) ++violations;
      }
    }
    violations_total += violations;
    csv.add_row({CsvTable::fmt(i), CsvTable::fmt(alpha),
                 CsvTable::fmt(1000), CsvTable::fmt(decisive),
                 CsvTable::fmt(violations)});
  }
  const double elapsed = seconds_since(t0);
  c.pass = violations_total == 0;
  c.detail = fmt_detail("20 instances x 1000 checks, %ld violations, %.2fs",
                        violations_total, elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------- 7

Criterion criterion7() {
  Criterion c = make_criterion(7, "uniform <= anchored <= single-set collapse moduli");
  const auto t0 = Clock::now();

  struct FamilyCase {
    std::string name;
    Subspace V;
    SetFamily fam;
    std::vector<double> eps;
    int res;
  };
  std::vector<FamilyCase> cases;

  {  // Euclidean plane, two unit-radius members over the first axis.
    const Space e2(2, NormSpec::Lq(2.0));
    const Subspace V(e2, {pt2(1, 0)});
    std::vector<BoundedSet> members;
    members.push_back(BoundedSet(e2, {pt2(0, 1)}));
    members.push_back(BoundedSet(e2, {pt2(0.6, 1)}));
    cases.push_back({"euclidean_plane", V,
                     SetFamily(members, Normalization::rad_eq_1),
                     {0.1, 0.5},
                     301});
  }
  {  // Two-block family whose members activate blocks of decreasing
     // rotundity; collapse slows down from one member to the next.
    const UniformFailureInstance base = build_p2_failure(1, 2, 2.0);
    const Subspace V = flatten_subspace(base.instance);
    std::vector<BoundedSet> members;
    members.push_back(materialize_product_set(base.instance));
    members.push_back(
        materialize_product_set(build_p2_failure(2, 2, 2.0).instance));
    cases.push_back({"two_block_flats", V,
                     SetFamily(members, Normalization::rad_eq_1),
                     {0.25, 0.5},
                     9});
  }
  {  // Conical norm with members sliding along the segment-valued anchor.
    const Space cs(3, NormSpec::CNorm());
    const Subspace V(cs, {pt3(1, 1, 0)});
    std::vector<BoundedSet> members;
    members.push_back(BoundedSet(cs, {pt3(1, 0, 0)}));
    members.push_back(BoundedSet(cs, {pt3(1, 0, 1)}));
    members.push_back(BoundedSet(cs, {pt3(1, 0, 0.1)}));
    cases.push_back({"segment_anchor", V, SetFamily(members),
                     {0.5, 1.0},
                     101});
  }

  CsvTable csv({"family", "anchor", "eps", "p2", "lp2", "p1"});
  bool ordered = true;
  double worst_slack = 0.0;
  for (const FamilyCase& fc : cases) {
    const ModulusCurve p2 = p2_modulus(fc.V, fc.fam, fc.eps, fc.res);
    for (std::size_t a = 0; a < fc.fam.members.size(); ++a) {
      const ModulusCurve lp2 =
          lp2_modulus(fc.V, fc.fam, fc.fam.members[a], fc.eps, fc.res);
      const ModulusCurve p1 =
          p1_modulus(fc.V, fc.fam.members[a], fc.eps, fc.res);
      for (std::size_t e = 0; e < fc.eps.size(); ++e) {
        const double d2 = p2.entries[e].second;
        const double dl = lp2.entries[e].second;
        const double d1 = p1.entries[e].second;
        ordered = ordered && d2 <= dl + 1e-6 && dl <= d1 + 1e-6;
        worst_slack = std::max(worst_slack, std::max(d2 - dl, dl - d1));
        csv.add_row({fc.name, CsvTable::fmt(static_cast<int>(a)),
                     CsvTable::fmt(fc.eps[e]), CsvTable::fmt(d2),
                     CsvTable::fmt(dl), CsvTable::fmt(d1)});
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c.pass = ordered;
  c.detail = fmt_detail(
      "3 families, every anchor and eps ordered (worst slack %.3g), %.2fs",
      worst_slack, elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------- 8

Criterion criterion8() {
  Criterion c = make_criterion(8, "near-minimizing sequences concentrate on finite prefixes");
  const auto t0 = Clock::now();
  Rng rng(808);
  static const double ps[] = {1.0, 2.0, 3.0};
  CsvTable csv({"instance", "eps", "j", "max_tail", "holds", "minimizing"});
  bool all_ok = true;
  for (int i = 0; i < 10; ++i) {
    const int m = 3 + (i % 2);
    const double p = ps[rng.uniform_int(0, 2)];
    std::vector<ProductComponent> comps;
    for (int b = 0; b < 2; ++b) {
      const Space space = testutil::random_space(rng, 3, false, true);
      const Subspace sub = testutil::random_subspace(rng, space);
      const BoundedSet set = testutil::random_set(rng, space, 2, 3);
      comps.push_back({space, sub, set});
    }
    for (int b = 2; b < m; ++b) {
      const Space e2(2, NormSpec::Lq(2.0));
      const Subspace full(e2, {pt2(1, 0), pt2(0, 1)});
      Point u = pt2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      if (u.norm() < 0.5) u = pt2(0.8, -0.4);
      comps.push_back({e2, full, BoundedSet(e2, {u, Point(-u)})});
    }
    const ProductInstance inst(p, std::move(comps));
    const ProductCenterCloud center = product_center(inst, 1e-6, 1);

    ProductPoint dir = product_zero(inst);
    for (int b = 0; b < 2; ++b) {
      const int k = inst.components[b].subspace.subspace_dim();
      Eigen::VectorXd coeffs(k);
      for (int j = 0; j < k; ++j) coeffs[j] = rng.uniform(-0.5, 0.5);
      dir.blocks[b] = inst.components[b].subspace.from_coeffs(coeffs);
    }
    std::vector<ProductPoint> seq;
    for (int t = 1; t <= 20; ++t) {
      ProductPoint y = center.best;
      for (std::size_t b = 0; b < y.blocks.size(); ++b) {
        y.blocks[b] += dir.blocks[b] / static_cast<double>(t);
      }
      seq.push_back(std::move(y));
    }
    for (const double eps : {0.1, 0.01}) {
      const TailMassReport rep = tail_mass_check(inst, seq, eps);
      const bool ok = rep.holds && rep.j <= 2 && rep.sequence_is_minimizing;
      all_ok = all_ok && ok;
      csv.add_row({CsvTable::fmt(i), CsvTable::fmt(eps), CsvTable::fmt(rep.j),
                   CsvTable::fmt(rep.max_tail),
                   CsvTable::fmt(rep.holds ? 1 : 0),
                   CsvTable::fmt(rep.sequence_is_minimizing ? 1 : 0)});
    }
  }
  const double elapsed = seconds_since(t0);
  c.pass = all_ok;
  c.detail = fmt_detail(
      "10 instances, eps in {0.1, 0.01}: finite prefix j<=2 with tails "
      "below eps, %.2fs",
      elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------- 9

Criterion criterion9() {
  Criterion c = make_criterion(9, "directional rotundity: Euclidean value and flat-face zero");
  const auto t0 = Clock::now();
  CsvTable csv({"space", "eps", "modulus"});

  const Space e2(2, NormSpec::Lq(2.0));
  const UredReport round = ured_probe(e2, pt2(0, 1), {1.0});
  const double got = round.details[0].modulus;
  const double expected = 1.0 - std::sqrt(3.0) / 2.0;
  csv.add_row({"l2", CsvTable::fmt(1.0), CsvTable::fmt(got)});

  const Space l1(2, NormSpec::Lq(1.0));
  const UredReport flat = ured_probe(l1, pt2(1, -1), {1.0});
  const double flat_mod = flat.details[0].modulus;
  csv.add_row({"l1", CsvTable::fmt(1.0), CsvTable::fmt(flat_mod)});

  const double elapsed = seconds_since(t0);
  c.pass = std::abs(got - expected) <= 1e-3 && flat_mod <= 1e-9;
  c.detail = fmt_detail(
      "round modulus %.6f vs 1-sqrt(3)/2=%.6f; flat-face modulus %.2g, "
      "%.2fs",
      got, expected, flat_mod, elapsed);
  c.artifact = csv.str();
  return c;
}

// ---------------------------------------------------------------------

std::vector<Criterion> run_battery() {
  std::vector<Criterion> out;
  out.push_back(criterion1());
  Criterion c2, c3;
  criteria23(c2, c3);
  out.push_back(c2);
  out.push_back(c3);
  out.push_back(criterion4());
  out.push_back(criterion5());
  out.push_back(criterion6());
  out.push_back(criterion7());
  out.push_back(criterion8());
  out.push_back(criterion9());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool run_demo(const std::string& out) {
  const std::string cmd = std::string(RCLAB_BIN) +
                          " demo p2-failure --nmax 8 --out " + out +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

Criterion criterion10(const std::vector<Criterion>& first,
                      const std::vector<Criterion>& second) {
  Criterion c = make_criterion(10, "fixed seeds reproduce byte-identical tables");
  const auto t0 = Clock::now();
  int mismatched = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i].artifact != second[i].artifact) ++mismatched;
  }
  const bool demo_ok = run_demo("acceptance_demo_a.csv") &&
                       run_demo("acceptance_demo_b.csv");
  const std::string demo_a = read_file("acceptance_demo_a.csv");
  const std::string demo_b = read_file("acceptance_demo_b.csv");
  const bool demo_identical = demo_ok && !demo_a.empty() && demo_a == demo_b;
  const double elapsed = seconds_since(t0);
  c.pass = mismatched == 0 && demo_identical;
  c.detail = fmt_detail(
      "%d of %zu rerun artifacts differ; demo rerun identical: %s, %.2fs",
      mismatched, first.size(), demo_identical ? "yes" : "no", elapsed);
  c.artifact = "";
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> first = run_battery();
  std::vector<Criterion> second = run_battery();
  std::vector<Criterion> all = first;
  all.push_back(criterion10(first, second));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!c.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%s)\n", c.pass ? "PASS" : "FAIL",
                c.index, c.title.c_str(), c.detail.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
