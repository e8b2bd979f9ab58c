#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rclab/counterexamples.hpp"
#include "rclab/property_lab.hpp"

using namespace rclab;

namespace {
Point pt2(double a, double b) {
  Point x(2);
  x << a, b;
  return x;
}
Point pt3(double a, double b, double c) {
  Point x(3);
  x << a, b, c;
  return x;
}
const Space kPlane(2, NormSpec::Lq(2.0));

struct FlatFamily {
  Space space;
  Subspace subspace;
  SetFamily family;
};

// The first N members of the product-space family that admits no uniform
// collapse rate, flattened into one composite-norm space.
FlatFamily flat_failure_family(int N) {
  UniformFailureInstance first = build_p2_failure(1, N, 2.0);
  Space space = flatten_space(first.instance);
  Subspace sub = flatten_subspace(first.instance);
  std::vector<BoundedSet> members;
  for (int n = 1; n <= N; ++n) {
    UniformFailureInstance inst = build_p2_failure(n, N, 2.0);
    members.push_back(materialize_product_set(inst.instance));
  }
  return {space, sub, SetFamily(std::move(members), Normalization::rad_eq_1)};
}
}  // namespace

TEST_CASE("family normalization flag is verified") {
  Subspace V(kPlane, {pt2(1, 0)});
  BoundedSet ok(kPlane, {pt2(0, 1)});
  BoundedSet bad(kPlane, {pt2(0, 2)});
  SetFamily claimed({ok, bad}, Normalization::rad_eq_1);
  CHECK_THROWS_AS(solve_family(V, claimed), ValidationError);
  SetFamily fine({ok}, Normalization::rad_eq_1);
  CHECK(solve_family(V, fine).size() == 1);
  CHECK_THROWS_AS(SetFamily({}, Normalization::none), ValidationError);
}

TEST_CASE("uniform modulus of a one-member family is the single modulus") {
  Subspace V(kPlane, {pt2(1, 0)});
  BoundedSet F(kPlane, {pt2(0, 1)});
  SetFamily fam({F});
  ModulusCurve p2 = p2_modulus(V, fam, {0.1, 0.5}, 301);
  ModulusCurve p1 = p1_modulus(V, F, {0.1, 0.5}, 301);
  REQUIRE(p2.entries.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(p2.entries[i].second ==
          doctest::Approx(p1.entries[i].second).epsilon(1e-9));
  }
}

TEST_CASE("euclidean plane family keeps a positive uniform modulus") {
  Subspace V(kPlane, {pt2(1, 0)});
  BoundedSet F1(kPlane, {pt2(0, 1)});
  BoundedSet F2(kPlane, {pt2(0.6, 1)});
  SetFamily fam({F1, F2}, Normalization::rad_eq_1);
  ModulusCurve curve = p2_modulus(V, fam, {0.1, 0.25, 0.5}, 301);
  double prev = 0.0;
  for (const auto& [eps, delta] : curve.entries) {
    CHECK(delta > 1e-4);
    CHECK(delta >= prev - 1e-12);  // larger eps never shrinks delta
    prev = delta;
  }
}

TEST_CASE("no uniform rate across the growing block family") {
  FlatFamily f1 = flat_failure_family(1);
  FlatFamily f2 = flat_failure_family(2);
  ModulusCurve c1 = p2_modulus(f1.subspace, f1.family, {0.5}, 9);
  ModulusCurve c2 = p2_modulus(f2.subspace, f2.family, {0.5}, 9);
  const double d1 = c1.entries[0].second;
  const double d2 = c2.entries[0].second;
  // The witness sits at distance one while its sublevel excess is
  // 2^(1/(n+1)) - 1, so the uniform delta is capped block by block.
  CHECK(d1 <= std::pow(2.0, 1.0 / 2.0) - 1.0 + 1e-9);
  CHECK(d2 <= std::pow(2.0, 1.0 / 3.0) - 1.0 + 1e-9);
  CHECK(d2 < d1 - 0.01);
  CHECK(d1 > 0.01);
  CHECK(d2 > 0.01);
}

TEST_CASE("local deltas track the uniform delta on finite families") {
  FlatFamily f2 = flat_failure_family(2);
  LocalUniformComparison cmp =
      local_vs_uniform_compare(f2.subspace, f2.family, 0.5, 9);
  REQUIRE(cmp.anchor_deltas.size() == 2);
  for (double d : cmp.anchor_deltas) {
    CHECK(d >= cmp.uniform_delta - 1e-9);
  }
  CHECK(cmp.min_anchor_delta ==
        doctest::Approx(cmp.uniform_delta).epsilon(1e-3));
}

TEST_CASE("local modulus collapses on the split-norm projection family") {
  Space s(3, NormSpec::CNorm());
  Subspace V(s, {pt3(1, 1, 0)});
  BoundedSet anchor(s, {pt3(1, 0, 0)});
  std::vector<BoundedSet> members = {anchor};
  for (int k : {1, 10, 100}) {
    members.push_back(BoundedSet(s, {pt3(1, 0, 1.0 / k)}));
  }
  SetFamily fam(members);
  ModulusCurve local = lp2_modulus(V, fam, anchor, {1.0}, 101);
  // Members approach the anchor in Hausdorff distance while their center
  // sets jump to the far end of the anchor's center segment, so the
  // local delta is squeezed down to the distance of the finest member
  // present (0.01 here); it cannot stabilize at any positive value.
  CHECK(local.entries[0].second <= 0.02);

  // Same geometry in the Euclidean norm: centers move continuously and
  // the local modulus stays bounded away from zero.
  Space e(3, NormSpec::Lq(2.0));
  Subspace Ve(e, {pt3(1, 1, 0)});
  BoundedSet anchor_e(e, {pt3(1, 0, 0)});
  std::vector<BoundedSet> members_e = {anchor_e};
  for (int k : {1, 10, 100}) {
    members_e.push_back(BoundedSet(e, {pt3(1, 0, 1.0 / k)}));
  }
  SetFamily fam_e(members_e);
  ModulusCurve local_e = lp2_modulus(Ve, fam_e, anchor_e, {1.0}, 101);
  CHECK(local_e.entries[0].second > 0.05);
}

TEST_CASE("anchored modulus of a single-member family acts like p1") {
  Subspace V(kPlane, {pt2(1, 0)});
  BoundedSet F(kPlane, {pt2(0, 1)});
  SetFamily fam({F});
  ModulusCurve lp2 = lp2_modulus(V, fam, F, {0.25}, 301);
  ModulusCurve p1 = p1_modulus(V, F, {0.25}, 301);
  CHECK(lp2.entries[0].second ==
        doctest::Approx(p1.entries[0].second).epsilon(1e-9));
}

TEST_CASE("modulus ordering holds across kinds") {
  FlatFamily f2 = flat_failure_family(2);
  for (double eps : {0.25, 0.5}) {
    ModulusCurve p2 = p2_modulus(f2.subspace, f2.family, {eps}, 9);
    for (const BoundedSet& anchor : f2.family.members) {
      ModulusCurve lp2 =
          lp2_modulus(f2.subspace, f2.family, anchor, {eps}, 9);
      ModulusCurve p1 = p1_modulus(f2.subspace, anchor, {eps}, 9);
      CHECK(p2.entries[0].second <= lp2.entries[0].second + 1e-6);
      CHECK(lp2.entries[0].second <= p1.entries[0].second + 1e-6);
    }
  }
}

TEST_CASE("ball cover probe: euclidean plane passes a positive delta") {
  Subspace Y(kPlane, {pt2(1, 0)});
  QurResult res = qur_probe(kPlane, Y, 0.5, 40, SamplerCfg{41});
  CHECK(res.delta_estimate >= 0.01);
  CHECK(!res.witness.has_value());
}

TEST_CASE("ball cover probe: stricter eps never enlarges delta") {
  Subspace Y(kPlane, {pt2(1, 0)});
  QurResult strict = qur_probe(kPlane, Y, 0.1, 24, SamplerCfg{31});
  QurResult loose = qur_probe(kPlane, Y, 0.5, 24, SamplerCfg{31});
  CHECK(strict.delta_estimate <= loose.delta_estimate + 1e-12);
}

TEST_CASE("ball cover probe: zero subspace still covers via w = 0") {
  Subspace Z(kPlane, {});
  QurResult res = qur_probe(kPlane, Z, 0.5, 10, SamplerCfg{21});
  CHECK(res.delta_estimate > 0.0);
}

TEST_CASE("directional rotundity: euclidean closed form") {
  Point z = pt2(1, -1);
  UredReport rep = ured_probe(kPlane, z, {1.0});
  REQUIRE(rep.details.size() == 1);
  CHECK(rep.details[0].modulus ==
        doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-2));
  CHECK(std::abs(rep.details[0].modulus - (1.0 - std::sqrt(3.0) / 2.0)) <
        1e-3);
  // The worst chord really is a unit-ball chord of the right length.
  const Point& x = rep.details[0].x;
  const Point& y = rep.details[0].y;
  CHECK(norm(kPlane, x) <= 1.0 + 1e-6);
  CHECK(norm(kPlane, y) <= 1.0 + 1e-6);
  CHECK(norm(kPlane, Point(x - y)) >= 1.0 - 1e-6);
}

TEST_CASE("directional rotundity: flat face gives exactly zero") {
  Space l1(2, NormSpec::Lq(1.0));
  UredReport rep = ured_probe(l1, pt2(1, -1), {1.0, 2.0});
  for (const auto& d : rep.details) {
    CHECK(d.modulus <= 1e-9);
    CHECK(d.modulus >= 0.0);
  }
}

TEST_CASE("directional rotundity: positive on rotund norms, rejects junk") {
  Space l3(2, NormSpec::Lq(3.0));
  UredReport rep = ured_probe(l3, pt2(1, 1), {1.0});
  CHECK(rep.details[0].modulus > 0.01);
  CHECK_THROWS_AS(ured_probe(kPlane, pt2(0, 0), {1.0}), ValidationError);
  CHECK_THROWS_AS(ured_probe(kPlane, pt2(1, 0), {2.5}), ValidationError);
  CHECK_THROWS_AS(ured_probe(kPlane, pt2(1, 0), {0.0}), ValidationError);
}

TEST_CASE("semicontinuity rows: constant sequence has zero gaps") {
  Subspace V(kPlane, {pt2(1, 0)});
  BoundedSet F(kPlane, {pt2(0.3, 1)});
  std::vector<SemicontinuityRow> rows = semicontinuity_gap(V, {F, F, F});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.input_hausdorff == 0.0);
    CHECK(r.lhsc_gap < 1e-9);
    CHECK(r.uhsc_gap < 1e-9);
  }
}

TEST_CASE("semicontinuity rows: euclidean projections move continuously") {
  Subspace V(kPlane, {pt2(1, 0)});
  std::vector<BoundedSet> seq;
  for (double a : {0.5, 0.2, 0.05, 0.0}) {
    seq.push_back(BoundedSet(kPlane, {pt2(a, 1)}));
  }
  std::vector<SemicontinuityRow> rows = semicontinuity_gap(V, seq);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    // Projection onto the axis is exactly the first coordinate here, so
    // gaps are bounded by the input distance (plus cloud fuzz).
    CHECK(r.lhsc_gap <= r.input_hausdorff + 0.01);
    CHECK(r.uhsc_gap <= r.input_hausdorff + 0.01);
  }
}
