#pragma once

#include <string>

#include <json.hpp>

#include "rclab/direct_sum.hpp"
#include "rclab/property_lab.hpp"

namespace rclab {

using Json = nlohmann::json;

/// Parses a file as JSON; throws ValidationError with the path on
/// failure.
Json load_json_file(const std::string& path);

Json norm_spec_to_json(const NormSpec& spec);
NormSpec norm_spec_from_json(const Json& j, const std::string& where);

Json space_to_json(const Space& space);
Space space_from_json(const Json& j, const std::string& where);

Json bounded_set_to_json(const BoundedSet& set);
BoundedSet bounded_set_from_json(const Space& space, const Json& j,
                                 const std::string& where);

Json subspace_to_json(const Subspace& v);
Subspace subspace_from_json(const Space& space, const Json& j,
                            const std::string& where);

struct SolveInstance {
  Space space;
  Subspace subspace;
  BoundedSet set;
  double tol = 1e-6;
};

SolveInstance solve_instance_from_json(const Json& j);

ProductInstance product_instance_from_json(const Json& j);

struct FamilyInstance {
  Space space;
  Subspace subspace;
  SetFamily family;
};

FamilyInstance family_instance_from_json(const Json& j);

enum class InstanceKind { solve, product, family };

/// Classifies an instance file by its top-level keys.
InstanceKind detect_instance_kind(const Json& j);

}  // namespace rclab
