#include "rclab/io.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace rclab {

namespace {

const Json& require_key(const Json& j, const char* key,
                        const std::string& where) {
  if (!j.is_object()) {
    throw ValidationError(where + ": expected an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ValidationError(where + ": expected a number");
  }
  return j.get<double>();
}

int require_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    throw ValidationError(where + ": expected an integer");
  }
  return j.get<int>();
}

Point point_from_json(const Json& j, int dim, const std::string& where) {
  if (!j.is_array()) {
    throw ValidationError(where + ": expected an array of coordinates");
  }
  if (static_cast<int>(j.size()) != dim) {
    throw ValidationError(where + ": expected " + std::to_string(dim) +
                          " coordinates, got " + std::to_string(j.size()));
  }
  Point p(dim);
  for (int i = 0; i < dim; ++i) {
    p[i] = require_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return p;
}

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open instance file: " + path);
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

Json norm_spec_to_json(const NormSpec& spec) {
  Json j;
  switch (spec.kind) {
    case NormSpec::Kind::lq:
      j["kind"] = "lq";
      j["q"] = spec.q;
      return j;
    case NormSpec::Kind::cnorm:
      j["kind"] = "cnorm";
      return j;
    case NormSpec::Kind::block_p:
      break;
  }
  throw ValidationError("composite norms have no instance-file encoding");
}

NormSpec norm_spec_from_json(const Json& j, const std::string& where) {
  const Json& kind = require_key(j, "kind", where);
  if (!kind.is_string()) {
    throw ValidationError(where + ".kind: expected a string");
  }
  const std::string k = kind.get<std::string>();
  if (k == "lq") {
    return NormSpec::Lq(require_number(require_key(j, "q", where),
                                       where + ".q"));
  }
  if (k == "cnorm") {
    return NormSpec::CNorm();
  }
  throw ValidationError(where + ".kind: unknown norm kind '" + k + "'");
}

Json space_to_json(const Space& space) {
  Json j;
  j["dim"] = space.dim;
  j["norm"] = norm_spec_to_json(space.norm_spec);
  return j;
}

Space space_from_json(const Json& j, const std::string& where) {
  const int dim = require_int(require_key(j, "dim", where), where + ".dim");
  const NormSpec spec =
      norm_spec_from_json(require_key(j, "norm", where), where + ".norm");
  try {
    return Space(dim, spec);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Json bounded_set_to_json(const BoundedSet& set) {
  Json pts = Json::array();
  for (const auto& p : set.points) pts.push_back(point_to_json(p));
  Json j;
  j["points"] = pts;
  return j;
}

BoundedSet bounded_set_from_json(const Space& space, const Json& j,
                                 const std::string& where) {
  const Json& pts = require_key(j, "points", where);
  if (!pts.is_array() || pts.empty()) {
    throw ValidationError(where + ".points: expected a nonempty array");
  }
  std::vector<Point> points;
  points.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    points.push_back(point_from_json(
        pts[i], space.dim, where + ".points[" + std::to_string(i) + "]"));
  }
  try {
    return BoundedSet(space, std::move(points));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Json subspace_to_json(const Subspace& v) {
  Json basis = Json::array();
  for (int jcol = 0; jcol < v.basis.cols(); ++jcol) {
    basis.push_back(point_to_json(v.basis.col(jcol)));
  }
  Json j;
  j["basis"] = basis;
  return j;
}

Subspace subspace_from_json(const Space& space, const Json& j,
                            const std::string& where) {
  const Json& basis = require_key(j, "basis", where);
  if (!basis.is_array()) {
    throw ValidationError(where + ".basis: expected an array of vectors");
  }
  std::vector<Point> vecs;
  vecs.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    vecs.push_back(point_from_json(
        basis[i], space.dim, where + ".basis[" + std::to_string(i) + "]"));
  }
  try {
    return Subspace(space, vecs);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

SolveInstance solve_instance_from_json(const Json& j) {
  const Space space = space_from_json(require_key(j, "space", "instance"),
                                      "instance.space");
  Subspace sub = subspace_from_json(
      space, require_key(j, "subspace", "instance"), "instance.subspace");
  BoundedSet set = bounded_set_from_json(
      space, require_key(j, "set", "instance"), "instance.set");
  double tol = 1e-6;
  if (j.contains("tol")) {
    tol = require_number(j["tol"], "instance.tol");
    if (!(tol > 0.0)) {
      throw ValidationError("instance.tol: must be positive");
    }
  }
  return SolveInstance{space, std::move(sub), std::move(set), tol};
}

ProductInstance product_instance_from_json(const Json& j) {
  const double p =
      require_number(require_key(j, "p", "instance"), "instance.p");
  const Json& comps = require_key(j, "components", "instance");
  if (!comps.is_array() || comps.empty()) {
    throw ValidationError("instance.components: expected a nonempty array");
  }
  std::vector<ProductComponent> components;
  components.reserve(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string where = "instance.components[" + std::to_string(i) + "]";
    const Json& cj = comps[i];
    const Space space =
        space_from_json(require_key(cj, "space", where), where + ".space");
    Subspace sub = subspace_from_json(
        space, require_key(cj, "subspace", where), where + ".subspace");
    BoundedSet set = bounded_set_from_json(
        space, require_key(cj, "set", where), where + ".set");
    components.push_back(
        ProductComponent{space, std::move(sub), std::move(set)});
  }
  try {
    return ProductInstance(p, std::move(components));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  }
}

FamilyInstance family_instance_from_json(const Json& j) {
  const Space space = space_from_json(require_key(j, "space", "instance"),
                                      "instance.space");
  Subspace sub = subspace_from_json(
      space, require_key(j, "subspace", "instance"), "instance.subspace");
  const Json& members = require_key(j, "members", "instance");
  if (!members.is_array() || members.empty()) {
    throw ValidationError("instance.members: expected a nonempty array");
  }
  std::vector<BoundedSet> sets;
  sets.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    sets.push_back(bounded_set_from_json(
        space, members[i], "instance.members[" + std::to_string(i) + "]"));
  }
  Normalization n = Normalization::none;
  if (j.contains("normalization")) {
    const Json& nj = j["normalization"];
    if (!nj.is_string()) {
      throw ValidationError("instance.normalization: expected a string");
    }
    const std::string s = nj.get<std::string>();
    if (s == "rad_eq_1") {
      n = Normalization::rad_eq_1;
    } else if (s == "none") {
      n = Normalization::none;
    } else {
      throw ValidationError("instance.normalization: unknown value '" + s +
                            "'");
    }
  }
  return FamilyInstance{space, std::move(sub),
                        SetFamily(std::move(sets), n)};
}

InstanceKind detect_instance_kind(const Json& j) {
  if (!j.is_object()) {
    throw ValidationError("instance: expected a JSON object");
  }
  if (j.contains("components") || j.contains("p")) {
    return InstanceKind::product;
  }
  if (j.contains("members")) return InstanceKind::family;
  if (j.contains("space") && j.contains("subspace") && j.contains("set")) {
    return InstanceKind::solve;
  }
  throw ValidationError(
      "instance: unrecognized shape (expected solve, product, or family "
      "keys)");
}

}  // namespace rclab
