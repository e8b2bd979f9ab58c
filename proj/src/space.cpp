#include "rclab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rclab {

NormSpec NormSpec::Lq(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw ValidationError("lq norm requires finite exponent q >= 1, got " +
                          std::to_string(q));
  }
  NormSpec s;
  s.kind = Kind::lq;
  s.q = q;
  return s;
}

NormSpec NormSpec::CNorm() {
  NormSpec s;
  s.kind = Kind::cnorm;
  return s;
}

NormSpec NormSpec::BlockP(double p,
                          std::vector<std::pair<int, NormSpec>> blocks) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ValidationError("block_p norm requires finite exponent p >= 1");
  }
  if (blocks.empty()) {
    throw ValidationError("block_p norm requires at least one block");
  }
  for (const auto& [d, inner] : blocks) {
    if (d <= 0) throw ValidationError("block_p block dimension must be >= 1");
    const int need = inner.required_dim();
    if (need >= 0 && need != d) {
      throw ValidationError("block_p inner descriptor dimension mismatch");
    }
    if (inner.kind == Kind::cnorm && d != 3) {
      throw ValidationError("cnorm block must have dimension 3");
    }
  }
  NormSpec s;
  s.kind = Kind::block_p;
  s.q = p;
  s.blocks = std::move(blocks);
  return s;
}

bool NormSpec::operator==(const NormSpec& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::lq:
      return q == other.q;
    case Kind::cnorm:
      return true;
    case Kind::block_p:
      if (q != other.q || blocks.size() != other.blocks.size()) return false;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].first != other.blocks[i].first ||
            blocks[i].second != other.blocks[i].second) {
          return false;
        }
      }
      return true;
  }
  return false;
}

int NormSpec::required_dim() const {
  switch (kind) {
    case Kind::lq:
      return -1;
    case Kind::cnorm:
      return 3;
    case Kind::block_p: {
      int total = 0;
      for (const auto& [d, inner] : blocks) total += d;
      return total;
    }
  }
  return -1;
}

Space::Space(int dim_, NormSpec spec) : dim(dim_), norm_spec(std::move(spec)) {
  if (dim < 1) {
    throw ValidationError("space dimension must be >= 1, got " +
                          std::to_string(dim));
  }
  const int need = norm_spec.required_dim();
  if (need >= 0 && need != dim) {
    throw ValidationError("norm requires dimension " + std::to_string(need) +
                          ", space has " + std::to_string(dim));
  }
}

namespace {

// l_q norm of a contiguous segment, scaled by the max entry to avoid
// overflow for large q.
double lq_norm_segment(const double* x, int n, double q) {
  if (q == 2.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
  }
  if (q == 1.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::abs(x[i]);
    return s;
  }
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(std::abs(x[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double cnorm_segment(const double* x) {
  return std::abs(x[0]) + std::sqrt(x[1] * x[1] + x[2] * x[2]);
}

double norm_segment(const NormSpec& spec, const double* x, int n);

double block_p_segment(const NormSpec& spec, const double* x) {
  const double p = spec.q;
  // Accumulate block norms, then take the outer l_p sum with the same
  // max-scaling guard used for plain l_q.
  std::vector<double> bn;
  bn.reserve(spec.blocks.size());
  int off = 0;
  for (const auto& [d, inner] : spec.blocks) {
    bn.push_back(norm_segment(inner, x + off, d));
    off += d;
  }
  return lq_norm_segment(bn.data(), static_cast<int>(bn.size()), p);
}

double norm_segment(const NormSpec& spec, const double* x, int n) {
  switch (spec.kind) {
    case NormSpec::Kind::lq:
      return lq_norm_segment(x, n, spec.q);
    case NormSpec::Kind::cnorm:
      return cnorm_segment(x);
    case NormSpec::Kind::block_p:
      return block_p_segment(spec, x);
  }
  return 0.0;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Subgradient written into g (same layout as x).
void subgradient_segment(const NormSpec& spec, const double* x, int n,
                         double* g) {
  switch (spec.kind) {
    case NormSpec::Kind::lq: {
      const double q = spec.q;
      if (q == 1.0) {
        for (int i = 0; i < n; ++i) g[i] = sign_of(x[i]);
        return;
      }
      double m = 0.0;
      for (int i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
      if (m == 0.0) {
        for (int i = 0; i < n; ++i) g[i] = 0.0;
        return;
      }
      // grad ||x||_q = sign(x_i) |x_i|^{q-1} / ||x||^{q-1}, scale-free in m.
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::pow(std::abs(x[i]) / m, q);
      const double denom = std::pow(s, (q - 1.0) / q);
      for (int i = 0; i < n; ++i) {
        g[i] = sign_of(x[i]) * std::pow(std::abs(x[i]) / m, q - 1.0) / denom;
      }
      return;
    }
    case NormSpec::Kind::cnorm: {
      g[0] = sign_of(x[0]);
      const double w = std::sqrt(x[1] * x[1] + x[2] * x[2]);
      if (w > 0.0) {
        g[1] = x[1] / w;
        g[2] = x[2] / w;
      } else {
        g[1] = 0.0;
        g[2] = 0.0;
      }
      return;
    }
    case NormSpec::Kind::block_p: {
      const double p = spec.q;
      const int m = static_cast<int>(spec.blocks.size());
      std::vector<double> bn(m);
      int off = 0;
      for (int b = 0; b < m; ++b) {
        bn[b] = norm_segment(spec.blocks[b].second, x + off,
                             spec.blocks[b].first);
        off += spec.blocks[b].first;
      }
      const double total = lq_norm_segment(bn.data(), m, p);
      off = 0;
      for (int b = 0; b < m; ++b) {
        const int d = spec.blocks[b].first;
        subgradient_segment(spec.blocks[b].second, x + off, d, g + off);
        // Chain rule through the outer l_p sum of block norms.
        double w;
        if (total == 0.0) {
          w = 0.0;
        } else if (p == 1.0) {
          w = 1.0;
        } else {
          w = std::pow(bn[b] / total, p - 1.0);
        }
        for (int i = 0; i < d; ++i) g[off + i] *= w;
        off += d;
      }
      return;
    }
  }
}

double lower_factor(const NormSpec& spec, int n) {
  switch (spec.kind) {
    case NormSpec::Kind::lq:
      // ||x||_q >= |x|_2 for q <= 2; >= n^{1/q - 1/2} |x|_2 for q > 2.
      return spec.q <= 2.0
                 ? 1.0
                 : std::pow(static_cast<double>(n), 1.0 / spec.q - 0.5);
    case NormSpec::Kind::cnorm:
      // (|x1| + w)^2 >= x1^2 + w^2 with w = sqrt(x2^2 + x3^2).
      return 1.0;
    case NormSpec::Kind::block_p: {
      double inner_min = std::numeric_limits<double>::infinity();
      for (const auto& [d, s] : spec.blocks) {
        inner_min = std::min(inner_min, lower_factor(s, d));
      }
      const double m = static_cast<double>(spec.blocks.size());
      const double outer =
          spec.q <= 2.0 ? 1.0 : std::pow(m, 1.0 / spec.q - 0.5);
      return inner_min * outer;
    }
  }
  return 1.0;
}

double upper_factor(const NormSpec& spec, int n) {
  switch (spec.kind) {
    case NormSpec::Kind::lq:
      return spec.q >= 2.0
                 ? 1.0
                 : std::pow(static_cast<double>(n), 1.0 / spec.q - 0.5);
    case NormSpec::Kind::cnorm:
      // |x1| + w <= sqrt(2) sqrt(x1^2 + w^2).
      return std::sqrt(2.0);
    case NormSpec::Kind::block_p: {
      double inner_max = 0.0;
      for (const auto& [d, s] : spec.blocks) {
        inner_max = std::max(inner_max, upper_factor(s, d));
      }
      const double m = static_cast<double>(spec.blocks.size());
      const double outer =
          spec.q >= 2.0 ? 1.0 : std::pow(m, 1.0 / spec.q - 0.5);
      return inner_max * outer;
    }
  }
  return 1.0;
}

}  // namespace

double norm(const Space& space, const Point& x) {
  if (x.size() != space.dim) {
    throw ValidationError("vector dimension " + std::to_string(x.size()) +
                          " does not match space dimension " +
                          std::to_string(space.dim));
  }
  return norm_segment(space.norm_spec, x.data(), space.dim);
}

Point norm_subgradient(const Space& space, const Point& u) {
  if (u.size() != space.dim) {
    throw ValidationError("vector dimension does not match space dimension");
  }
  Point g(space.dim);
  subgradient_segment(space.norm_spec, u.data(), space.dim, g.data());
  return g;
}

double euclidean_lower_factor(const Space& space) {
  return lower_factor(space.norm_spec, space.dim);
}

double euclidean_upper_factor(const Space& space) {
  return upper_factor(space.norm_spec, space.dim);
}

NormValidationReport validate_norm(const Space& space, int sample_count,
                                   std::uint64_t seed) {
  if (sample_count < 1) {
    throw ValidationError("validate_norm requires sample_count >= 1");
  }
  Rng rng(seed);
  NormValidationReport rep;
  rep.samples = sample_count;

  const Point zero = Point::Zero(space.dim);
  rep.max_separation_violation = std::abs(norm(space, zero));

  for (int s = 0; s < sample_count; ++s) {
    Point x(space.dim), y(space.dim);
    for (int i = 0; i < space.dim; ++i) x[i] = rng.uniform(-10.0, 10.0);
    for (int i = 0; i < space.dim; ++i) y[i] = rng.uniform(-10.0, 10.0);
    const double a = rng.uniform(-5.0, 5.0);

    const double nx = norm(space, x);
    const double ny = norm(space, y);
    const double nxy = norm(space, x + y);
    rep.max_triangle_violation =
        std::max(rep.max_triangle_violation, nxy - nx - ny);

    const double nax = norm(space, a * x);
    rep.max_homogeneity_violation =
        std::max(rep.max_homogeneity_violation,
                 std::abs(nax - std::abs(a) * nx));

    if (x.norm() > 0.0 && nx <= 0.0) {
      rep.max_separation_violation = std::max(rep.max_separation_violation, 1.0);
    }
  }
  rep.ok = rep.max_triangle_violation <= 1e-12 &&
           rep.max_homogeneity_violation <= 1e-12 &&
           rep.max_separation_violation <= 1e-12;
  return rep;
}

}  // namespace rclab
