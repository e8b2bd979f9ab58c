#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "rclab/common.hpp"

namespace rclab {

using Point = Eigen::VectorXd;

/// Norm descriptor.
///
/// Public kinds (accepted in instance files):
///   lq     the l_q norm with real exponent q >= 1,
///   cnorm  |x1| + sqrt(x2^2 + x3^2) on R^3.
///
/// The block_p kind is an in-memory extension used to flatten l_p direct
/// sums of blocks into a single normed space; it never appears in
/// instance files. blocks holds (block dimension, inner descriptor)
/// pairs and q holds the outer exponent p.
struct NormSpec {
  enum class Kind { lq, cnorm, block_p };

  Kind kind = Kind::lq;
  double q = 2.0;
  std::vector<std::pair<int, NormSpec>> blocks;

  static NormSpec Lq(double q);
  static NormSpec CNorm();
  static NormSpec BlockP(double p, std::vector<std::pair<int, NormSpec>> blocks);

  bool operator==(const NormSpec& other) const;
  bool operator!=(const NormSpec& other) const { return !(*this == other); }

  /// Total dimension a block_p descriptor spans; -1 for plain kinds
  /// (any compatible dimension).
  int required_dim() const;
};

struct Space {
  int dim = 0;
  NormSpec norm_spec;

  Space(int dim, NormSpec spec);

  bool operator==(const Space& other) const {
    return dim == other.dim && norm_spec == other.norm_spec;
  }
  bool operator!=(const Space& other) const { return !(*this == other); }
};

/// Norm of x in the given space. Overflow-safe for large exponents via
/// max-scaling; exact Euclidean formula for q = 2.
double norm(const Space& space, const Point& x);

/// One element of the subdifferential of the norm at u (the zero vector
/// at u = 0). For kinked norms (q = 1, cnorm axis) a fixed-sign
/// selection is made so results are deterministic.
Point norm_subgradient(const Space& space, const Point& u);

/// kappa with ||x|| >= kappa * |x|_2 for all x; used to convert norm
/// bounds into Euclidean search-box bounds.
double euclidean_lower_factor(const Space& space);

/// U with ||x|| <= U * |x|_2 for all x; the Lipschitz constant of the
/// norm with respect to Euclidean steps.
double euclidean_upper_factor(const Space& space);

struct NormValidationReport {
  int samples = 0;
  double max_triangle_violation = 0.0;
  double max_homogeneity_violation = 0.0;
  double max_separation_violation = 0.0;
  bool ok = false;  // all violations <= 1e-12
};

/// Samples random vectors and scalars and measures worst-case violation
/// of the triangle inequality, absolute homogeneity, and separation.
NormValidationReport validate_norm(const Space& space, int sample_count,
                                   std::uint64_t seed);

}  // namespace rclab
