#pragma once

#include "cayleykit/arith.hpp"
#include "cayleykit/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cayleykit {

/// x |-> matrix * x + translation, between integer lattices.
struct AffineLatticeMap {
  IntegerMatrix matrix;
  LatticeVector translation;

  static AffineLatticeMap identity(std::size_t dim) {
    return {IntegerMatrix::identity(dim), LatticeVector(dim, Integer(0))};
  }

  std::size_t source_dim() const { return matrix.cols(); }
  std::size_t target_dim() const { return matrix.rows(); }

  LatticeVector operator()(const LatticeVector& x) const { return add(matrix.apply(x), translation); }

  /// Invertible over the integers (square with determinant +-1).
  bool unimodular() const {
    if (matrix.rows() != matrix.cols()) return false;
    Integer det = determinant(matrix);
    return det == 1 || det == -1;
  }

  /// outer o inner
  friend AffineLatticeMap compose(const AffineLatticeMap& outer, const AffineLatticeMap& inner) {
    return {outer.matrix * inner.matrix, outer(inner.translation)};
  }

  friend bool operator==(const AffineLatticeMap&, const AffineLatticeMap&) = default;
};

/// <normal, x> <= offset
struct Inequality {
  LatticeVector normal;
  Integer offset;

  bool satisfied_by(const LatticeVector& x) const { return dot(normal, x) <= offset; }
  bool tight_at(const LatticeVector& x) const { return dot(normal, x) == offset; }

  friend bool operator==(const Inequality&, const Inequality&) = default;
  friend auto operator<=>(const Inequality& a, const Inequality& b) {
    if (a.normal != b.normal) return a.normal < b.normal ? std::strong_ordering::less : std::strong_ordering::greater;
    return cmp(a.offset, b.offset) <=> 0;
  }
};

/// <normal, x> == offset
struct Equation {
  LatticeVector normal;
  Integer offset;
  friend bool operator==(const Equation&, const Equation&) = default;
};

/// Irredundant H-representation with primitive normals.
struct FacetSystem {
  std::vector<Inequality> inequalities;
  std::vector<Equation> equations;

  bool contains(const LatticeVector& x) const {
    for (const auto& e : equations)
      if (dot(e.normal, x) != e.offset) return false;
    for (const auto& f : inequalities)
      if (!f.satisfied_by(x)) return false;
    return true;
  }
};

namespace detail {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  friend Bitset operator&(const Bitset& a, const Bitset& b) {
    Bitset r = a;
    for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= b.words_[i];
    return r;
  }

 private:
  std::vector<std::uint64_t> words_;
};

inline LatticeVector clear_denominators(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  LatticeVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i] * l).get_num();
  return make_primitive(r);
}

}  // namespace detail

/// Primitive inward facet normals a (a . r >= 0 for every generator r) of the
/// pointed cone spanned by `generators`, which must span R^dim. Incremental
/// double description over the dual cone; the result is sorted.
inline std::vector<LatticeVector> cone_facets(const std::vector<LatticeVector>& generators, std::size_t dim) {
  const std::size_t m = generators.size();
  if (dim == 0) return {};
  // greedy basis in index order
  std::vector<std::size_t> basis;
  std::vector<std::vector<Rational>> echelon;
  std::vector<std::size_t> echelon_pivot;
  for (std::size_t i = 0; i < m && basis.size() < dim; ++i) {
    std::vector<Rational> row(generators[i].begin(), generators[i].end());
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const auto p = echelon_pivot[e];
      if (row[p] == 0) continue;
      Rational f = row[p] / echelon[e][p];
      for (std::size_t j = 0; j < dim; ++j) row[j] -= f * echelon[e][j];
    }
    auto it = std::find_if(row.begin(), row.end(), [](const Rational& x) { return x != 0; });
    if (it == row.end()) continue;
    echelon_pivot.push_back(static_cast<std::size_t>(it - row.begin()));
    echelon.push_back(std::move(row));
    basis.push_back(i);
  }
  if (basis.size() != dim) throw std::invalid_argument("cone generators do not span the space");

  struct Ray {
    LatticeVector v;
    detail::Bitset zero;
  };
  std::vector<Ray> rays;
  {
    IntegerMatrix b(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) b(i, j) = generators[basis[i]][j];
    auto inv = inverse(to_rational(b));
    for (std::size_t j = 0; j < dim; ++j) {
      Ray r{detail::clear_denominators(inv->column(j)), detail::Bitset(m)};
      for (std::size_t i = 0; i < dim; ++i)
        if (i != j) r.zero.set(basis[i]);
      rays.push_back(std::move(r));
    }
  }
  std::vector<bool> in_basis(m, false);
  for (auto i : basis) in_basis[i] = true;

  for (std::size_t idx = 0; idx < m; ++idx) {
    if (in_basis[idx]) continue;
    const auto& g = generators[idx];
    std::vector<Integer> val(rays.size());
    for (std::size_t k = 0; k < rays.size(); ++k) val[k] = dot(g, rays[k].v);
    std::vector<Ray> next;
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (val[k] > 0) pos.push_back(k);
      if (val[k] < 0) neg.push_back(k);
      if (val[k] >= 0) {
        next.push_back(rays[k]);
        if (val[k] == 0) next.back().zero.set(idx);
      }
    }
    for (auto p : pos)
      for (auto n : neg) {
        detail::Bitset common = rays[p].zero & rays[n].zero;
        if (common.count() + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t)
          if (t != p && t != n && common.subset_of(rays[t].zero)) adjacent = false;
        if (!adjacent) continue;
        LatticeVector v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = val[p] * rays[n].v[j] - val[n] * rays[p].v[j];
        common.set(idx);
        next.push_back({make_primitive(std::move(v)), common});
      }
    rays = std::move(next);
  }
  std::vector<LatticeVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Cached affine-hull and facet data of a polytope, in a lattice basis of its
/// affine hull ("local" coordinates, full-dimensional in Z^dim).
struct PolytopeGeometry {
  std::size_t dim = 0;
  AffineLatticeMap to_local;    // ambient -> Z^dim, defined on the affine hull lattice
  AffineLatticeMap to_ambient;  // Z^dim -> ambient, a lattice isomorphism onto the affine hull lattice
  std::vector<Equation> equations;
  std::vector<LatticeVector> local_vertices;
  /// Facets in local coordinates, sorted, with their tight vertex indices.
  std::vector<Inequality> local_facets;
  std::vector<std::vector<std::size_t>> facet_vertices;
};

namespace detail {

/// Computes the geometry of conv(points); `is_vertex` flags the true vertices.
inline PolytopeGeometry analyze(const std::vector<LatticeVector>& points, std::size_t ambient,
                                std::vector<bool>& is_vertex) {
  PolytopeGeometry g;
  const auto& v0 = points.front();
  IntegerMatrix diffs(points.size(), ambient);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < ambient; ++j) diffs(i, j) = points[i][j] - v0[j];
  auto ce = column_echelon(diffs);
  g.dim = ce.rank;
  if (g.dim == ambient) {
    g.to_local = AffineLatticeMap::identity(ambient);
    g.to_ambient = AffineLatticeMap::identity(ambient);
  } else {
    IntegerMatrix w = unimodular_inverse(ce.transform);
    IntegerMatrix m(g.dim, ambient), e(ambient, g.dim);
    for (std::size_t i = 0; i < g.dim; ++i)
      for (std::size_t j = 0; j < ambient; ++j) {
        m(i, j) = ce.transform(j, i);
        e(j, i) = w(i, j);
      }
    LatticeVector mv0 = m.apply(v0);
    for (auto& x : mv0) x = -x;
    g.to_local = {m, mv0};
    g.to_ambient = {e, v0};
    for (std::size_t j = g.dim; j < ambient; ++j) {
      LatticeVector n = ce.transform.column(j);
      // canonical sign: first nonzero entry positive
      auto it = std::find_if(n.begin(), n.end(), [](const Integer& x) { return x != 0; });
      if (*it < 0)
        for (auto& x : n) x = -x;
      g.equations.push_back({n, dot(n, v0)});
    }
  }
  std::vector<LatticeVector> local;
  local.reserve(points.size());
  for (const auto& p : points) local.push_back(g.to_local(p));

  is_vertex.assign(points.size(), true);
  if (g.dim == 0) {
    for (std::size_t i = 1; i < points.size(); ++i) is_vertex[i] = false;
    g.local_vertices = {local.front()};
    return g;
  }
  std::vector<LatticeVector> lifted;
  for (const auto& p : local) {
    LatticeVector l = p;
    l.emplace_back(1);
    lifted.push_back(std::move(l));
  }
  auto normals = cone_facets(lifted, g.dim + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<LatticeVector> tight;
    for (const auto& a : normals)
      if (dot(a, lifted[i]) == 0) tight.push_back(a);
    is_vertex[i] = rank_of(tight, g.dim + 1) == g.dim;
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (is_vertex[i]) g.local_vertices.push_back(local[i]);
  for (const auto& a : normals) {
    // a . (x, 1) >= 0  <=>  -a' . x <= a_last
    Inequality f{LatticeVector(g.dim), a[g.dim]};
    for (std::size_t j = 0; j < g.dim; ++j) f.normal[j] = -a[j];
    g.local_facets.push_back(std::move(f));
  }
  std::sort(g.local_facets.begin(), g.local_facets.end());
  for (const auto& f : g.local_facets) {
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < g.local_vertices.size(); ++i)
      if (f.tight_at(g.local_vertices[i])) on.push_back(i);
    g.facet_vertices.push_back(std::move(on));
  }
  return g;
}

}  // namespace detail

/// A lattice polytope given by its vertices. Redundant generating points are
/// dropped at construction and noted in `provenance()`.
class LatticePolytope {
 public:
  LatticePolytope(std::size_t ambient_dim, std::vector<LatticeVector> points, std::string name = {})
      : ambient_dim_(ambient_dim), name_(std::move(name)) {
    if (points.empty()) throw std::invalid_argument("a polytope needs at least one point");
    for (const auto& p : points)
      if (p.size() != ambient_dim) throw std::invalid_argument("point " + to_string(p) + " has wrong dimension");
    std::vector<LatticeVector> distinct;
    std::set<LatticeVector> seen;
    for (auto& p : points) {
      if (!seen.insert(p).second) {
        provenance_.push_back("dropped duplicate point " + to_string(p));
        continue;
      }
      distinct.push_back(std::move(p));
    }
    std::vector<bool> is_vertex;
    auto geometry = detail::analyze(distinct, ambient_dim_, is_vertex);
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (is_vertex[i])
        vertices_.push_back(distinct[i]);
      else
        provenance_.push_back("dropped non-vertex point " + to_string(distinct[i]));
    }
    if (vertices_.size() != distinct.size()) geometry = detail::analyze(vertices_, ambient_dim_, is_vertex);
    geometry_ = std::make_shared<const PolytopeGeometry>(std::move(geometry));
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  /// Affine dimension.
  std::size_t dim() const { return geometry_->dim; }
  bool full_dimensional() const { return dim() == ambient_dim_; }
  const std::vector<LatticeVector>& vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& provenance() const { return provenance_; }
  const PolytopeGeometry& geometry() const { return *geometry_; }

  LatticePolytope renamed(std::string name) const {
    LatticePolytope p = *this;
    p.name_ = std::move(name);
    return p;
  }

  /// Vertex sets compared as sets.
  bool same_vertex_set(const LatticePolytope& other) const {
    if (ambient_dim_ != other.ambient_dim_ || vertices_.size() != other.vertices_.size()) return false;
    auto a = vertices_, b = other.vertices_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

 private:
  std::size_t ambient_dim_;
  std::vector<LatticeVector> vertices_;
  std::string name_;
  std::vector<std::string> provenance_;
  std::shared_ptr<const PolytopeGeometry> geometry_;
};

inline std::size_t affine_dim(const LatticePolytope& p) { return p.dim(); }

/// P mapped into a lattice basis of its affine hull, with the maps both ways.
struct Normalization {
  LatticePolytope polytope;
  AffineLatticeMap to_local;
  AffineLatticeMap to_ambient;
};

inline Normalization normalize_full_dim(const LatticePolytope& p) {
  const auto& g = p.geometry();
  if (p.full_dimensional()) return {p, g.to_local, g.to_ambient};
  return {LatticePolytope(g.dim, g.local_vertices, p.name()), g.to_local, g.to_ambient};
}

inline FacetSystem facets(const LatticePolytope& p) {
  const auto& g = p.geometry();
  FacetSystem fs;
  fs.equations = g.equations;
  const auto& m = g.to_local.matrix;
  for (const auto& f : g.local_facets) {
    // c . to_local(x) <= b  <=>  (M^T c) . x <= b - c . t
    LatticeVector n(p.ambient_dim(), Integer(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) n[j] += m(i, j) * f.normal[i];
    fs.inequalities.push_back({n, f.offset - dot(f.normal, g.to_local.translation)});
  }
  return fs;
}

/// m * P; m = 0 gives the single point 0.
inline LatticePolytope dilate(const LatticePolytope& p, const Integer& m) {
  if (m < 0) throw std::invalid_argument("dilation factor must be nonnegative");
  if (m == 0) return LatticePolytope(p.ambient_dim(), {LatticeVector(p.ambient_dim(), Integer(0))}, p.name());
  std::vector<LatticeVector> vs;
  for (const auto& v : p.vertices()) vs.push_back(scale(v, m));
  return LatticePolytope(p.ambient_dim(), std::move(vs), p.name());
}

/// conv(P0 x 0, P1 x e1, ..., Ps x es) in R^{q+s}.
inline LatticePolytope cayley_sum(const std::vector<LatticePolytope>& factors, std::string name = {}) {
  if (factors.empty()) throw std::invalid_argument("cayley_sum needs at least one factor");
  const std::size_t q = factors.front().ambient_dim();
  const std::size_t s = factors.size() - 1;
  std::vector<LatticeVector> pts;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j].ambient_dim() != q) throw std::invalid_argument("cayley_sum factors have mismatched ambient dimensions");
    for (const auto& v : factors[j].vertices()) {
      LatticeVector x = v;
      for (std::size_t i = 1; i <= s; ++i) x.emplace_back(i == j ? 1 : 0);
      pts.push_back(std::move(x));
    }
  }
  return LatticePolytope(q + s, std::move(pts), std::move(name));
}

inline LatticePolytope minkowski_sum(const LatticePolytope& a, const LatticePolytope& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("minkowski_sum of polytopes in different spaces");
  std::vector<LatticeVector> pts;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) pts.push_back(add(u, v));
  return LatticePolytope(a.ambient_dim(), std::move(pts));
}

inline Integer width(const LatticePolytope& p, std::size_t i) {
  if (i >= p.ambient_dim()) throw std::out_of_range("coordinate index out of range");
  Integer lo = p.vertices().front()[i], hi = lo;
  for (const auto& v : p.vertices()) {
    if (v[i] < lo) lo = v[i];
    if (v[i] > hi) hi = v[i];
  }
  return hi - lo;
}

struct PyramidStructure {
  std::size_t apex_index;
  LatticeVector apex;
  Inequality base;  // ambient facet inequality tight on every other vertex
};

/// Finds an apex at lattice distance one from the facet spanned by all other
/// vertices. Lower-dimensional inputs are tested inside their affine hull.
inline std::optional<PyramidStructure> is_lattice_pyramid(const LatticePolytope& p) {
  const auto& g = p.geometry();
  if (g.dim == 0) return std::nullopt;
  auto fs = facets(p);
  for (std::size_t f = 0; f < g.local_facets.size(); ++f) {
    if (g.facet_vertices[f].size() + 1 != p.num_vertices()) continue;
    std::size_t apex = 0;
    while (apex < g.facet_vertices[f].size() && g.facet_vertices[f][apex] == apex) ++apex;
    const auto& facet = g.local_facets[f];
    if (dot(facet.normal, g.local_vertices[apex]) == facet.offset - 1)
      return PyramidStructure{apex, p.vertices()[apex], fs.inequalities[f]};
  }
  return std::nullopt;
}

}  // namespace cayleykit
