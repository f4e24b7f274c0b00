#pragma once

// Standard polytope families and seeded random generators.

#include "cayleykit/polytope.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cayleykit {

/// conv(0, e_1, ..., e_n), scaled by `dilation`.
inline LatticePolytope standard_simplex(std::size_t n, long dilation = 1) {
  std::vector<LatticeVector> vs{LatticeVector(n, Integer(0))};
  for (std::size_t i = 0; i < n; ++i) vs.push_back(scale(unit_vector(n, i), Integer(dilation)));
  std::string name = dilation == 1 ? "simplex_" + std::to_string(n)
                                   : "dilated_simplex_" + std::to_string(n) + "x" + std::to_string(dilation);
  return LatticePolytope(n, std::move(vs), std::move(name));
}

/// Axis-parallel box [0, w_0] x ... x [0, w_{n-1}], all w_i >= 1.
inline LatticePolytope box(const std::vector<long>& widths) {
  const std::size_t n = widths.size();
  std::vector<LatticeVector> vs;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    LatticeVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1U ? widths[i] : 0;
    vs.push_back(std::move(v));
  }
  std::string name = "box";
  for (long w : widths) name += "_" + std::to_string(w);
  return LatticePolytope(n, std::move(vs), std::move(name));
}

inline LatticePolytope unit_cube(std::size_t n) {
  return box(std::vector<long>(n, 1)).renamed("cube_" + std::to_string(n));
}

/// Segment [a, b] in Z^1.
inline LatticePolytope segment(long a, long b) {
  return LatticePolytope(1, {lattice_vector({a}), lattice_vector({b})});
}

/// Cayley sum Q * point: the lattice pyramid over Q.
inline LatticePolytope lattice_pyramid(const LatticePolytope& base) {
  LatticePolytope apex(base.ambient_dim(), {LatticeVector(base.ambient_dim(), Integer(0))});
  return cayley_sum({base, apex}, "pyramid_over_" + base.name());
}

/// Deterministic stream; values do not depend on the standard library's
/// distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi].
  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

/// Hull of `points` random lattice points in [0, width]^dim. May be
/// lower-dimensional; callers that need full dimension retry.
inline LatticePolytope random_hull(SeededRng& rng, std::size_t dim, long width, std::size_t points) {
  std::vector<LatticeVector> pts;
  for (std::size_t k = 0; k < points; ++k) {
    LatticeVector p(dim);
    for (auto& x : p) x = rng.uniform(0, width);
    pts.push_back(std::move(p));
  }
  return LatticePolytope(dim, std::move(pts));
}

/// Full-dimensional random polytope: up to `max_points` points sampled in a
/// width-`width` box, resampled until the hull is full-dimensional.
inline LatticePolytope random_box_polytope(SeededRng& rng, std::size_t dim, long width, std::size_t max_points) {
  for (;;) {
    const auto k = static_cast<std::size_t>(rng.uniform(static_cast<long>(dim + 1), static_cast<long>(max_points)));
    auto p = random_hull(rng, dim, width, k);
    if (p.full_dimensional()) return p;
  }
}

}  // namespace cayleykit
