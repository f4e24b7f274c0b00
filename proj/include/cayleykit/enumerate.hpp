#pragma once

// Lattice point enumeration in dilates of a polytope.
//
// Points are enumerated in the local coordinates of the affine hull, one
// coordinate at a time. The bounds for coordinate j come from the facets of
// the projection of the polytope onto the first j coordinates, so every
// partial point visited extends to a real point of mP (or of its interior).

#include "cayleykit/polytope.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace cayleykit {

class LatticePointEnumerator {
 public:
  explicit LatticePointEnumerator(const LatticePolytope& p) : polytope_(p) {
    const auto& g = p.geometry();
    dim_ = g.dim;
    levels_.resize(dim_);
    for (std::size_t j = 1; j <= dim_; ++j) {
      std::vector<Inequality> ineqs;
      if (j == dim_) {
        ineqs = g.local_facets;
      } else {
        std::vector<LatticeVector> proj;
        for (const auto& v : g.local_vertices) proj.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j));
        ineqs = LatticePolytope(j, std::move(proj)).geometry().local_facets;
      }
      auto& level = levels_[j - 1];
      for (const auto& f : ineqs) {
        Constraint c;
        for (std::size_t i = 0; i + 1 < j; ++i) c.prefix.push_back(to_int64(f.normal[i]));
        c.coeff = to_int64(f.normal[j - 1]);
        c.offset = to_int64(f.offset);
        if (c.coeff > 0)
          level.upper.push_back(std::move(c));
        else if (c.coeff < 0)
          level.lower.push_back(std::move(c));
      }
    }
  }

  const LatticePolytope& polytope() const { return polytope_; }

  /// Number of lattice points in mP, or in its relative interior.
  Integer count(std::uint64_t m, bool interior) const {
    if (m == 0 || dim_ == 0) return 1;
    Integer total = 0;
    std::vector<std::int64_t> x(dim_);
    std::int64_t acc = 0;
    walk(0, m, interior, x, [&](std::int64_t lo, std::int64_t hi) {
      acc += hi - lo + 1;
      if (acc > (std::int64_t{1} << 60)) {
        total += Integer(static_cast<long>(acc));
        acc = 0;
      }
      return true;
    });
    return total + Integer(static_cast<long>(acc));
  }

  bool has_point(std::uint64_t m, bool interior) const {
    if (m == 0 || dim_ == 0) return true;
    bool found = false;
    std::vector<std::int64_t> x(dim_);
    walk(0, m, interior, x, [&](std::int64_t, std::int64_t) {
      found = true;
      return false;
    });
    return found;
  }

  /// Lattice points in local coordinates, lexicographically sorted.
  std::vector<LatticeVector> local_points(std::uint64_t m, bool interior) const {
    if (m == 0 || dim_ == 0) {
      LatticeVector pt(dim_, Integer(0));
      if (dim_ == 0 && m != 0) pt = polytope_.geometry().local_vertices.front();
      return {pt};
    }
    std::vector<LatticeVector> out;
    std::vector<std::int64_t> x(dim_);
    walk(0, m, interior, x, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t t = lo; t <= hi; ++t) {
        LatticeVector p(dim_);
        for (std::size_t i = 0; i + 1 < dim_; ++i) p[i] = static_cast<long>(x[i]);
        p[dim_ - 1] = static_cast<long>(t);
        out.push_back(std::move(p));
      }
      return true;
    });
    return out;
  }

  /// Lattice points in ambient coordinates, lexicographically sorted.
  std::vector<LatticeVector> points(std::uint64_t m, bool interior) const {
    const auto& g = polytope_.geometry();
    if (m == 0) return {LatticeVector(polytope_.ambient_dim(), Integer(0))};
    auto local = local_points(m, interior);
    if (polytope_.full_dimensional()) return local;
    // x = m * t0 + E * y  for  y local point of m * P_local
    std::vector<LatticeVector> out;
    out.reserve(local.size());
    const auto shift = scale(g.to_ambient.translation, Integer(static_cast<unsigned long>(m)));
    for (const auto& y : local) out.push_back(add(g.to_ambient.matrix.apply(y), shift));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Constraint {
    std::vector<std::int64_t> prefix;
    std::int64_t coeff = 0;
    std::int64_t offset = 0;
  };
  struct Level {
    std::vector<Constraint> upper;  // coeff > 0
    std::vector<Constraint> lower;  // coeff < 0
  };

  static std::int64_t floor_div64(__int128 a, std::int64_t b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<std::int64_t>(q);
  }

  // Calls leaf(lo, hi) for each admissible prefix with the final coordinate
  // ranging over [lo, hi]; stops early when leaf returns false.
  template <typename Leaf>
  bool walk(std::size_t j, std::uint64_t m, bool interior, std::vector<std::int64_t>& x, Leaf&& leaf) const {
    const auto& level = levels_[j];
    const __int128 mm = static_cast<__int128>(m);
    const __int128 strict = interior ? 1 : 0;
    bool has_lo = false, has_hi = false;
    std::int64_t lo = 0, hi = 0;
    for (const auto& c : level.upper) {
      __int128 rhs = mm * c.offset - strict;
      for (std::size_t i = 0; i < j; ++i) rhs -= static_cast<__int128>(c.prefix[i]) * x[i];
      std::int64_t b = floor_div64(rhs, c.coeff);
      if (!has_hi || b < hi) hi = b;
      has_hi = true;
    }
    for (const auto& c : level.lower) {
      __int128 rhs = mm * c.offset - strict;
      for (std::size_t i = 0; i < j; ++i) rhs -= static_cast<__int128>(c.prefix[i]) * x[i];
      // coeff * t <= rhs with coeff < 0  =>  t >= ceil(rhs / coeff) = -floor(rhs / -coeff)
      std::int64_t b = -floor_div64(rhs, -c.coeff);
      if (!has_lo || b > lo) lo = b;
      has_lo = true;
    }
    if (!has_lo || !has_hi) throw std::logic_error("unbounded enumeration level");
    if (lo > hi) return true;
    if (j + 1 == dim_) return leaf(lo, hi);
    for (std::int64_t t = lo; t <= hi; ++t) {
      x[j] = t;
      if (!walk(j + 1, m, interior, x, leaf)) return false;
    }
    return true;
  }

  LatticePolytope polytope_;
  std::size_t dim_ = 0;
  std::vector<Level> levels_;
};

/// Lattice points of mP (relative interior when `interior_only`), sorted.
/// `fs` must be facets(p); every enumerated point is checked against it.
inline std::vector<LatticeVector> lattice_points(const LatticePolytope& p, const FacetSystem& fs, std::uint64_t m,
                                                 bool interior_only) {
  auto pts = LatticePointEnumerator(p).points(m, interior_only);
  if (m == 0) return pts;
  const Integer mm(static_cast<unsigned long>(m));
  for (const auto& x : pts) {
    for (const auto& e : fs.equations)
      if (dot(e.normal, x) != mm * e.offset) throw std::logic_error("enumerated point off the affine hull");
    for (const auto& f : fs.inequalities) {
      Integer lhs = dot(f.normal, x), rhs = mm * f.offset;
      if (lhs > rhs || (interior_only && lhs == rhs)) throw std::logic_error("enumerated point violates a facet");
    }
  }
  return pts;
}

}  // namespace cayleykit
