#pragma once

// Cayley decompositions of lattice polytopes.
//
// The constructive pipeline lifts P to height one in Z^{n+1}, fixes a
// lattice simplex S on vertices of P whose cone contains a lowest interior
// lattice point x of the cone over P, and grows a face F of S in stages
// (F1, F2, F3, then G) until the barycentric coordinates outside F give a
// lattice projection of P onto a unimodular simplex. Every inequality the
// construction relies on is checked as it goes.
//
// The oracle instead enumerates every lattice projection of P onto a
// standard simplex, which is exhaustive because such a projection is fixed
// by the images of n+1 affinely independent vertices, and every vertex must
// land on a vertex of the simplex.

#include "cayleykit/bounds.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/enumerate.hpp"
#include "cayleykit/polytope.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cayleykit {

/// A decomposition failed verification. Indicates a bug.
class CayleyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A proven inequality of the construction failed on some input.
class CayleyBoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OracleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundMode { hard, warn };

struct BoundCheck {
  std::string name;
  Integer lhs;
  Integer rhs;
  bool holds = true;
  bool warning_only = false;  // failures are reported but never raised
};

/// P identified with a Cayley sum: `witness_iso` maps cayley_sum(factors)
/// onto P, and `projection` maps P onto the standard simplex Delta_s.
struct CayleyDecomposition {
  std::size_t q = 0;
  std::size_t s = 0;
  AffineLatticeMap projection;
  std::vector<LatticePolytope> factors;
  AffineLatticeMap witness_iso;
  std::vector<std::size_t> labels;  // per vertex of P: 0 for the origin, j for e_j
};

namespace detail {

inline std::optional<std::size_t> simplex_label(const LatticeVector& img) {
  std::size_t label = 0;
  for (std::size_t j = 0; j < img.size(); ++j) {
    if (img[j] == 0) continue;
    if (img[j] != 1 || label != 0) return std::nullopt;
    label = j + 1;
  }
  return label;
}

inline AffineLatticeMap lift_to_ambient(const AffineLatticeMap& local, const Normalization& norm) {
  return compose(local, norm.to_local);
}

}  // namespace detail

/// Builds and verifies the decomposition induced by a lattice projection of
/// P onto Delta_s. `pi` is defined on the ambient space of P; only its values
/// on the affine hull lattice matter. With `verify_hstar`, the h*-polynomial
/// of the reconstructed Cayley sum is compared with that of P.
inline CayleyDecomposition decomposition_from_projection(const LatticePolytope& p, const AffineLatticeMap& pi,
                                                         bool verify_hstar = true) {
  auto norm = normalize_full_dim(p);
  const auto& lp = norm.polytope;
  const std::size_t n = lp.ambient_dim();
  const AffineLatticeMap local = compose(pi, norm.to_ambient);
  const std::size_t s = local.target_dim();
  if (s > n) throw CayleyError("projection target exceeds the dimension of P");
  const std::size_t q = n - s;

  CayleyDecomposition out;
  out.q = q;
  out.s = s;
  std::vector<bool> used(s + 1, false);
  for (const auto& v : lp.vertices()) {
    auto label = detail::simplex_label(local(v));
    if (!label) throw CayleyError("vertex " + to_string(v) + " does not map to a vertex of the simplex");
    out.labels.push_back(*label);
    used[*label] = true;
  }
  for (std::size_t j = 0; j <= s; ++j)
    if (!used[j]) throw CayleyError("projection misses vertex " + std::to_string(j) + " of the simplex");

  auto kernel = integer_kernel(local.matrix);
  if (kernel.size() != q) throw CayleyError("projection is not surjective");
  std::vector<LatticeVector> anchors(s + 1);
  std::vector<bool> seen(s + 1, false);
  for (std::size_t i = 0; i < lp.num_vertices(); ++i)
    if (!seen[out.labels[i]]) {
      anchors[out.labels[i]] = lp.vertices()[i];
      seen[out.labels[i]] = true;
    }
  const LatticeVector& w0 = anchors[0];
  IntegerMatrix m(n, n);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = kernel[j][i];
  for (std::size_t j = 1; j <= s; ++j) {
    auto u = sub(anchors[j], w0);
    for (std::size_t i = 0; i < n; ++i) m(i, q + j - 1) = u[i];
  }
  IntegerMatrix minv;
  try {
    minv = unimodular_inverse(m);
  } catch (const std::domain_error&) {
    throw CayleyError("fiber coordinates are not a lattice basis");
  }

  std::vector<std::vector<LatticeVector>> pts(s + 1);
  for (std::size_t i = 0; i < lp.num_vertices(); ++i) {
    auto c = minv.apply(sub(lp.vertices()[i], w0));
    for (std::size_t j = 0; j < s; ++j)
      if (c[q + j] != (out.labels[i] == j + 1 ? 1 : 0)) throw CayleyError("fiber coordinates disagree with labels");
    c.resize(q);
    pts[out.labels[i]].push_back(std::move(c));
  }
  for (auto& f : pts) out.factors.emplace_back(q, std::move(f));

  const AffineLatticeMap witness_local{m, w0};
  out.witness_iso = compose(norm.to_ambient, witness_local);
  out.projection = detail::lift_to_ambient(local, norm);

  auto sum = cayley_sum(out.factors);
  std::vector<LatticeVector> image;
  for (const auto& v : sum.vertices()) image.push_back(out.witness_iso(v));
  if (!LatticePolytope(p.ambient_dim(), image).same_vertex_set(p))
    throw CayleyError("witness map does not carry the Cayley sum onto P");
  for (const auto& v : p.vertices())
    if (!detail::simplex_label(out.projection(v))) throw CayleyError("ambient projection is inconsistent");
  if (verify_hstar && h_star(sum).coefficients != h_star(lp).coefficients)
    throw CayleyError("h* of the Cayley sum differs from h* of P");
  // ambient labels follow P's vertex order; the local polytope keeps it
  return out;
}

/// The decomposition of cayley_sum(factors) read off from its construction.
inline CayleyDecomposition decomposition_of_cayley_sum(const std::vector<LatticePolytope>& factors,
                                                       bool verify_hstar = true) {
  auto p = cayley_sum(factors);
  const std::size_t q = factors.front().ambient_dim(), s = factors.size() - 1;
  IntegerMatrix m(s, q + s);
  for (std::size_t j = 0; j < s; ++j) m(j, q + j) = 1;
  return decomposition_from_projection(p, {m, LatticeVector(s, Integer(0))}, verify_hstar);
}

/// The fiber over lambda of r * cayley_sum(factors), in R^q. lambda lists
/// the last s coordinates; lambda_0 = r - sum(lambda). The fiber is checked
/// against the Minkowski sum lambda_0 P_0 + ... + lambda_s P_s, both as
/// polytopes and point by point.
inline LatticePolytope fibers(const CayleyDecomposition& d, const LatticeVector& lambda, std::uint64_t r) {
  if (lambda.size() != d.s) throw std::invalid_argument("lambda has the wrong length");
  Integer l0 = static_cast<unsigned long>(r);
  for (const auto& l : lambda) {
    if (l < 0) throw std::invalid_argument("lambda lies outside the dilated simplex");
    l0 -= l;
  }
  if (l0 < 0) throw std::invalid_argument("lambda lies outside the dilated simplex");
  const std::size_t q = d.q;

  std::vector<LatticePolytope> parts;
  for (std::size_t j = 0; j <= d.s; ++j) {
    const Integer& c = j == 0 ? l0 : lambda[j - 1];
    if (c > 0) parts.push_back(dilate(d.factors[j], c));
  }
  if (parts.empty()) parts.push_back(dilate(d.factors[0], 0));
  LatticePolytope mink = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) mink = minkowski_sum(mink, parts[i]);

  auto sum = cayley_sum(d.factors);
  std::vector<LatticeVector> fiber_pts;
  for (const auto& y : LatticePointEnumerator(sum).points(r, false)) {
    if (!std::equal(lambda.begin(), lambda.end(), y.begin() + static_cast<std::ptrdiff_t>(q))) continue;
    fiber_pts.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(q));
  }
  if (fiber_pts.empty()) throw CayleyError("empty fiber over a lattice point of the dilated simplex");
  LatticePolytope fiber(q, fiber_pts);
  if (!fiber.same_vertex_set(mink)) throw CayleyError("fiber differs from the Minkowski sum of the factors");
  auto mink_pts = LatticePointEnumerator(mink).points(1, false);
  std::sort(fiber_pts.begin(), fiber_pts.end());
  if (mink_pts != fiber_pts) throw CayleyError("fiber lattice points differ from the Minkowski sum");
  return mink;
}

// ---------------------------------------------------------------------------
// Constructive pipeline

/// P in a lattice basis of its affine hull, lifted to height one.
struct ConeEmbedding {
  Normalization normalization;
  std::vector<LatticeVector> lifted;  // (v, 1) per vertex of the local polytope

  const LatticePolytope& polytope() const { return normalization.polytope; }
  std::size_t n() const { return normalization.polytope.ambient_dim(); }
};

/// Barycentric coordinates with respect to a lattice simplex on vertices of P.
struct SimplexFrame {
  std::vector<std::size_t> vertex_indices;   // into P's vertex list, increasing
  std::vector<LatticeVector> lifted_vertices;
  RationalMatrix inverse;                    // b(y) = inverse * y

  RationalVector b(const LatticeVector& y) const { return inverse.apply(to_rational(y)); }
};

struct PipelineState {
  std::size_t n = 0;
  std::size_t d = 0;
  LatticeVector x;               // lifted, last coordinate n + 1 - d
  RationalVector bx;
  std::vector<std::size_t> V, Z, F0, F1, F2, F3, G, F;
  LatticeVector fractional;      // {x}
  Rational fractional_sum;       // sum of b_i(x) over F0
  std::vector<RationalVector> vertex_b;  // b(w) for each lifted vertex w of P
  bool f3_bound_held = true;
  bool f3_greedy = true;  // which F3 candidate was kept
  BoundMode mode = BoundMode::hard;
  std::vector<BoundCheck> checks;

  void check(std::string name, const Integer& lhs, const Integer& rhs, bool warning_only = false) {
    BoundCheck c{std::move(name), lhs, rhs, lhs <= rhs, warning_only};
    checks.push_back(c);
    if (!c.holds && !warning_only && mode == BoundMode::hard)
      throw CayleyBoundViolation(c.name + ": " + lhs.get_str() + " > " + rhs.get_str());
  }
};

namespace detail {

inline std::size_t face_dim(const std::vector<LatticeVector>& vs, const std::vector<std::size_t>& idx) {
  if (idx.size() <= 1) return 0;
  std::vector<LatticeVector> diffs;
  for (std::size_t i = 1; i < idx.size(); ++i) diffs.push_back(sub(vs[idx[i]], vs[idx[0]]));
  return rank_of(diffs, vs.front().size());
}

/// Pulling triangulation of a full-dimensional polytope, pulling vertices in
/// index order; simplices are returned sorted lexicographically. Faces are vertex index sets; the facets of a face W are the
/// intersections of W with facets of P having dimension dim W - 1.
class PullingTriangulation {
 public:
  explicit PullingTriangulation(const LatticePolytope& p) : p_(p) {
    for (const auto& f : p.geometry().facet_vertices) facets_.push_back(f);
  }

  std::vector<std::vector<std::size_t>> simplices() {
    std::vector<std::size_t> all(p_.num_vertices());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto out = triangulate(all, p_.dim());
    for (auto& s : out) std::sort(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const std::vector<std::vector<std::size_t>>& triangulate(const std::vector<std::size_t>& face, std::size_t k) {
    if (auto it = memo_.find(face); it != memo_.end()) return it->second;
    std::vector<std::vector<std::size_t>> out;
    if (k == 0) {
      out.push_back(face);
    } else {
      const std::size_t apex = face.front();
      std::set<std::vector<std::size_t>> seen;
      for (const auto& f : facets_) {
        std::vector<std::size_t> sub;
        std::set_intersection(face.begin(), face.end(), f.begin(), f.end(), std::back_inserter(sub));
        if (sub.size() < k || sub == face || std::binary_search(sub.begin(), sub.end(), apex)) continue;
        if (face_dim(p_.vertices(), sub) != k - 1 || !seen.insert(sub).second) continue;
        for (auto simplex : triangulate(sub, k - 1)) {
          simplex.insert(simplex.begin(), apex);
          out.push_back(std::move(simplex));
        }
      }
    }
    return memo_.emplace(face, std::move(out)).first->second;
  }

  const LatticePolytope& p_;
  std::vector<std::vector<std::size_t>> facets_;
  std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> memo_;
};

inline std::vector<std::size_t> indices_where(std::size_t n, const std::vector<bool>& in) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) out.push_back(i);
  return out;
}

inline std::vector<bool> membership(std::size_t n, const std::vector<std::size_t>& idx) {
  std::vector<bool> in(n, false);
  for (auto i : idx) in[i] = true;
  return in;
}

inline Integer size_of(const std::vector<std::size_t>& v) { return static_cast<unsigned long>(v.size()); }

}  // namespace detail

/// Chooses x (the lexicographically smallest interior lattice point of
/// (n-d+1)P) and the first simplex of the pulling triangulation whose cone
/// contains it, then classifies the coordinates of x.
inline std::tuple<ConeEmbedding, SimplexFrame, PipelineState> embed_and_frame(const LatticePolytope& p, std::size_t d,
                                                                             BoundMode mode = BoundMode::hard) {
  ConeEmbedding emb{normalize_full_dim(p), {}};
  const auto& lp = emb.polytope();
  const std::size_t n = emb.n();
  if (n == 0) throw std::invalid_argument("embed_and_frame needs a polytope of positive dimension");
  if (d > n) throw std::invalid_argument("degree exceeds dimension");
  for (const auto& v : lp.vertices()) {
    auto l = v;
    l.emplace_back(1);
    emb.lifted.push_back(std::move(l));
  }

  PipelineState st;
  st.n = n;
  st.d = d;
  st.mode = mode;
  const std::uint64_t height = n + 1 - d;
  auto interior = LatticePointEnumerator(lp).points(height, true);
  if (interior.empty()) throw EhrhartError("(n-d+1)P has no interior lattice point");
  st.x = interior.front();
  st.x.emplace_back(static_cast<unsigned long>(height));

  SimplexFrame frame;
  for (const auto& simplex : detail::PullingTriangulation(lp).simplices()) {
    std::vector<LatticeVector> cols;
    for (auto i : simplex) cols.push_back(emb.lifted[i]);
    auto inv = inverse(to_rational(IntegerMatrix::from_columns(cols, n + 1)));
    if (!inv) throw CayleyError("pulling triangulation produced a degenerate simplex");
    auto b = inv->apply(to_rational(st.x));
    if (std::all_of(b.begin(), b.end(), [](const Rational& c) { return c >= 0; })) {
      frame = {simplex, cols, *inv};
      st.bx = std::move(b);
      break;
    }
  }
  if (frame.vertex_indices.empty()) throw CayleyError("no simplex of the triangulation contains x");

  // frame sanity: the coordinates reproduce x
  RationalVector back(n + 1, Rational(0));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t k = 0; k <= n; ++k) back[k] += st.bx[i] * frame.lifted_vertices[i][k];
  if (back != to_rational(st.x)) throw CayleyError("barycentric coordinates do not reproduce x");

  st.fractional = st.x;
  st.fractional_sum = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto& c = st.bx[i];
    if (c > 1) throw CayleyBoundViolation("b_i(x) exceeds one");
    if (c == 0) {
      st.Z.push_back(i);
    } else if (c == 1) {
      st.V.push_back(i);
      st.fractional = sub(st.fractional, frame.lifted_vertices[i]);
    } else {
      st.F0.push_back(i);
      st.fractional_sum += c;
    }
  }
  if (st.fractional[n] != Integer(static_cast<unsigned long>(n + 1 - d - st.V.size())))
    throw CayleyError("last coordinate of the fractional part is off");
  for (const auto& w : emb.lifted) st.vertex_b.push_back(frame.b(w));
  return {std::move(emb), std::move(frame), std::move(st)};
}

/// Frame vertices whose coordinate is non-integral at some lattice point:
/// exactly the rows of the inverse matrix with a fractional entry.
inline std::vector<std::size_t> compute_F1(const SimplexFrame& frame) {
  std::vector<std::size_t> out;
  const auto& m = frame.inverse;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_integral(m(i, j))) {
        out.push_back(i);
        break;
      }
  return out;
}

inline void compute_F1(const SimplexFrame& frame, PipelineState& st) {
  st.F1 = compute_F1(frame);
  st.check("dim F1 <= 4d-2", detail::size_of(st.F1), Integer(static_cast<unsigned long>(4 * st.d)) - 1);
}

/// Z is already known from the frame; F2 adds every coordinate that is
/// negative on some vertex of P. Also checks the signed-support inequalities
/// at every vertex.
inline void compute_Z_F2(PipelineState& st) {
  const std::size_t m = st.n + 1;
  const Integer d = static_cast<unsigned long>(st.d);
  const Integer z = detail::size_of(st.Z);
  st.check("|Z| <= d", z, d);

  auto in_z = detail::membership(m, st.Z), in_v = detail::membership(m, st.V);
  auto in_f2 = detail::membership(m, st.F1);
  for (auto i : st.Z) in_f2[i] = true;
  // report the vertex with the least slack for each inequality
  std::optional<std::pair<long, long>> minus, plus;
  for (const auto& b : st.vertex_b) {
    long v_minus = 0, v_plus = 0, z_minus = 0, z_plus = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (b[i] < 0) in_f2[i] = true;
      const int sg = sgn(b[i]);
      if (in_v[i] && sg > 0) ++v_plus;
      if (in_v[i] && sg < 0) ++v_minus;
      if (in_z[i] && sg > 0) ++z_plus;
      if (in_z[i] && sg < 0) ++z_minus;
    }
    if (!minus || v_minus - z_plus > minus->first - minus->second) minus = {v_minus, z_plus};
    if (!plus || v_plus - z_minus - 1 > plus->first - plus->second) plus = {v_plus, z_minus + 1};
  }
  st.check("|V-(w)| <= |Z+(w)|", minus->first, minus->second);
  st.check("|V+(w)| <= |Z-(w)| + 1", plus->first, plus->second);
  st.F2 = detail::indices_where(m, in_f2);
  st.check("dim F2 <= 4d-2 + (|Z|^2+7|Z|)/2", detail::size_of(st.F2) - 1, 4 * d - 2 + (z * z + 7 * z) / 2);
}

namespace detail {

/// Adds all but the lowest outside index of any vertex with two or more
/// nonzero coordinates outside the set, until none is left.
inline void complete_F3(const PipelineState& st, std::vector<bool>& in_f3) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& b : st.vertex_b) {
      std::size_t seen = 0;
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (in_f3[i] || b[i] == 0) continue;
        if (seen++ > 0) {
          in_f3[i] = true;
          changed = true;
        }
      }
    }
  }
}

/// Coordinates outside F3 that reach 2 on some vertex.
inline std::vector<bool> g_of(const PipelineState& st, const std::vector<bool>& in_f3) {
  std::vector<bool> in_g(in_f3.size(), false);
  for (const auto& b : st.vertex_b)
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!in_f3[i] && b[i] >= 2) in_g[i] = true;
  return in_g;
}

inline std::size_t final_face_size(const PipelineState& st, const std::vector<bool>& in_f3) {
  auto in_g = g_of(st, in_f3);
  std::size_t k = 0;
  for (std::size_t i = 0; i < in_f3.size(); ++i) k += in_f3[i] || in_g[i];
  return k;
}

}  // namespace detail

/// Two candidates for F3, both starting from F2. The greedy one repeatedly
/// adds the largest remaining part of V+(w) outside F2 over vertices w of P,
/// at most |Z| times, stopping once no vertex has two coordinates left
/// outside; the plain one skips the greedy. Both are then completed so that
/// every vertex has at most one nonzero coordinate outside F3. The candidate
/// giving the smaller final face is kept (the greedy one on ties).
inline void compute_F3(PipelineState& st) {
  const std::size_t m = st.n + 1;
  auto greedy = detail::membership(m, st.F2);
  auto in_v = detail::membership(m, st.V);
  for (std::size_t step = 0; step < st.Z.size(); ++step) {
    std::size_t best = 0, best_size = 0;
    for (std::size_t k = 0; k < st.vertex_b.size(); ++k) {
      std::size_t r = 0;
      for (std::size_t i = 0; i < m; ++i) r += !greedy[i] && in_v[i] && st.vertex_b[k][i] > 0;
      if (r > best_size) best = k, best_size = r;
    }
    if (best_size <= 1) break;
    for (std::size_t i = 0; i < m; ++i)
      if (in_v[i] && st.vertex_b[best][i] > 0) greedy[i] = true;
  }
  detail::complete_F3(st, greedy);
  auto plain = detail::membership(m, st.F2);
  detail::complete_F3(st, plain);
  st.f3_greedy = detail::final_face_size(st, plain) >= detail::final_face_size(st, greedy);
  st.F3 = detail::indices_where(m, st.f3_greedy ? greedy : plain);
  const Integer z = detail::size_of(st.Z), d = static_cast<unsigned long>(st.d);
  st.check("dim F3 <= 4d-2 + (|Z|^2+11|Z|)/2", detail::size_of(st.F3) - 1, 4 * d - 2 + (z * z + 11 * z) / 2, true);
  st.f3_bound_held = st.checks.back().holds;
}

/// G collects the remaining coordinates that reach 2 on some vertex; F is
/// F3 together with G.
inline void compute_G(PipelineState& st) {
  const std::size_t m = st.n + 1;
  auto in_f3 = detail::membership(m, st.F3);
  auto in_g = detail::g_of(st, in_f3);
  st.G = detail::indices_where(m, in_g);
  const Integer z = detail::size_of(st.Z), d = static_cast<unsigned long>(st.d);
  st.check("|G| <= 2d-2|Z|", detail::size_of(st.G), 2 * d - 2 * z);
  for (std::size_t i = 0; i < m; ++i) in_g[i] = in_g[i] || in_f3[i];
  st.F = detail::indices_where(m, in_g);
}

struct PipelineOptions {
  BoundMode mode = BoundMode::hard;
  bool verify_hstar = true;
  std::optional<HStarData> hstar;  // reuse when already known
};

struct PipelineRun {
  CayleyDecomposition decomposition;
  std::size_t degree = 0;
  bool short_circuit = false;        // degree 0: P is a unimodular simplex
  std::optional<PipelineState> state;
  std::vector<std::size_t> frame_vertices;

  bool f3_bound_held() const { return !state || state->f3_bound_held; }
  /// Every check, including the final q bounds.
  std::vector<BoundCheck> checks;
  bool all_hard_checks_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds || c.warning_only; });
  }
};

/// Runs the full constructive pipeline and returns a verified decomposition.
inline PipelineRun run_pipeline(const LatticePolytope& p, const PipelineOptions& opt = {}) {
  PipelineRun run;
  auto norm = normalize_full_dim(p);
  const auto& lp = norm.polytope;
  const std::size_t n = lp.ambient_dim();
  const HStarData h = opt.hstar ? *opt.hstar : h_star(lp);
  run.degree = h.degree;

  if (h.degree == 0) {
    run.short_circuit = true;
    if (n == 0) {
      run.decomposition = decomposition_from_projection(p, {IntegerMatrix(0, p.ambient_dim()), {}}, opt.verify_hstar);
      return run;
    }
    const auto& vs = lp.vertices();
    if (vs.size() != n + 1) throw CayleyError("degree-0 polytope is not a simplex");
    std::vector<LatticeVector> cols;
    for (std::size_t i = 1; i <= n; ++i) cols.push_back(sub(vs[i], vs[0]));
    IntegerMatrix a;
    try {
      a = unimodular_inverse(IntegerMatrix::from_columns(cols, n));
    } catch (const std::domain_error&) {
      throw CayleyError("degree-0 polytope is not a unimodular simplex");
    }
    LatticeVector t = a.apply(vs[0]);
    for (auto& c : t) c = -c;
    run.decomposition = decomposition_from_projection(p, compose({a, t}, norm.to_local), opt.verify_hstar);
    BoundCheck qc{"q <= n", Integer(0), Integer(static_cast<unsigned long>(n)), true, false};
    run.checks.push_back(qc);
    return run;
  }

  auto [emb, frame, st] = embed_and_frame(p, h.degree, opt.mode);
  run.frame_vertices = frame.vertex_indices;
  compute_F1(frame, st);
  compute_Z_F2(st);
  compute_F3(st);
  compute_G(st);
  if (st.F.empty()) throw CayleyError("empty face F for a polytope of positive degree");

  auto in_f = detail::membership(n + 1, st.F);
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i <= n; ++i)
    if (!in_f[i]) outside.push_back(i);
  IntegerMatrix pm(outside.size(), n);
  LatticeVector pt(outside.size());
  for (std::size_t r = 0; r < outside.size(); ++r) {
    const std::size_t i = outside[r];
    for (std::size_t j = 0; j <= n; ++j) {
      const auto& e = frame.inverse(i, j);
      if (!is_integral(e)) throw CayleyError("projection coordinate is not integral");
      if (j < n)
        pm(r, j) = e.get_num();
      else
        pt[r] = e.get_num();
    }
  }
  run.decomposition = decomposition_from_projection(p, compose({pm, pt}, norm.to_local), opt.verify_hstar);
  const Integer q = static_cast<unsigned long>(run.decomposition.q);
  if (run.decomposition.q + 1 != st.F.size()) throw CayleyError("base dimension differs from dim F");
  if (st.f3_bound_held) st.check("q <= (d^2+19d-4)/2", q, cayley_bound(h.degree));
  st.check("q <= n", q, Integer(static_cast<unsigned long>(n)));
  run.checks = st.checks;
  run.state = std::move(st);
  return run;
}

inline CayleyDecomposition decompose(const LatticePolytope& p, BoundMode mode = BoundMode::hard) {
  PipelineOptions opt;
  opt.mode = mode;
  return run_pipeline(p, opt).decomposition;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct OracleResult {
  std::size_t q_star = 0;
  CayleyDecomposition witness;
};

namespace detail {

/// All assignments of vertex labels in {0..s} (0 for the origin, j for e_j)
/// realized by a lattice projection of the full-dimensional polytope `p`
/// onto Delta_s, using every label. Sorted lexicographically.
inline std::vector<std::vector<std::size_t>> cayley_labelings(const LatticePolytope& p, std::size_t s) {
  const std::size_t n = p.ambient_dim();
  const auto& vs = p.vertices();
  std::vector<std::vector<std::size_t>> out;
  if (s == 0) {
    out.emplace_back(vs.size(), 0);
    return out;
  }
  if (s > n) return out;
  std::vector<std::size_t> basis{0};
  std::vector<LatticeVector> diffs;
  for (std::size_t i = 1; i < vs.size() && basis.size() < n + 1; ++i) {
    diffs.push_back(sub(vs[i], vs[0]));
    if (rank_of(diffs, n) == diffs.size())
      basis.push_back(i);
    else
      diffs.pop_back();
  }
  std::vector<LatticeVector> cols;
  for (std::size_t i = 1; i <= n; ++i) cols.push_back(sub(vs[basis[i]], vs[0]));
  const IntegerMatrix dm = IntegerMatrix::from_columns(cols, n);
  const Integer det_z = determinant(dm);
  const auto inv = *inverse(to_rational(dm));
  // adj(D) (w - b0) = det * D^{-1} (w - b0), integral
  std::vector<std::vector<std::int64_t>> coeff(vs.size(), std::vector<std::int64_t>(n));
  for (std::size_t k = 0; k < vs.size(); ++k) {
    auto c = inv.apply(to_rational(sub(vs[k], vs[0])));
    for (std::size_t i = 0; i < n; ++i) coeff[k][i] = to_int64(Rational(c[i] * det_z).get_num());
  }
  std::vector<std::vector<std::int64_t>> adj(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = to_int64(Rational(inv(i, j) * det_z).get_num());
  const std::int64_t det = to_int64(det_z);

  std::vector<std::size_t> lab(n + 1, 0);
  std::vector<std::size_t> full(vs.size());
  for (;;) {
    // integrality of the linear part: for each target row r,
    // sum_i ([lab_i == r] - [lab_0 == r]) adj[i-1][:] divisible by det
    bool ok = true;
    for (std::size_t r = 1; r <= s && ok; ++r)
      for (std::size_t j = 0; j < n && ok; ++j) {
        __int128 acc = 0;
        for (std::size_t i = 1; i <= n; ++i) {
          const int c = (lab[i] == r) - (lab[0] == r);
          if (c) acc += static_cast<__int128>(c) * adj[i - 1][j];
        }
        ok = acc % det == 0;
      }
    if (ok) {
      std::vector<bool> used(s + 1, false);
      for (std::size_t k = 0; k < vs.size() && ok; ++k) {
        // det * pi(w) = det * e_{lab0} + sum_i (e_{lab_i} - e_{lab0}) coeff[k][i-1]
        std::size_t label = 0;
        for (std::size_t r = 1; r <= s && ok; ++r) {
          __int128 acc = lab[0] == r ? det : 0;
          for (std::size_t i = 1; i <= n; ++i) {
            const int c = (lab[i] == r) - (lab[0] == r);
            if (c) acc += static_cast<__int128>(c) * coeff[k][i - 1];
          }
          if (acc == 0) continue;
          if (acc != det || label != 0) ok = false;
          label = r;
        }
        full[k] = label;
        used[label] = true;
      }
      if (ok && std::all_of(used.begin(), used.end(), [](bool u) { return u; })) out.push_back(full);
    }
    std::size_t pos = n + 1;
    while (pos > 0 && lab[pos - 1] == s) lab[--pos] = 0;
    if (pos == 0) break;
    ++lab[pos - 1];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Projection of the full-dimensional `p` realizing `labels`.
inline AffineLatticeMap projection_for_labels(const LatticePolytope& p, std::size_t s,
                                              const std::vector<std::size_t>& labels) {
  const std::size_t n = p.ambient_dim();
  const auto& vs = p.vertices();
  std::vector<std::size_t> basis{0};
  std::vector<LatticeVector> diffs;
  for (std::size_t i = 1; i < vs.size() && basis.size() < n + 1; ++i) {
    diffs.push_back(sub(vs[i], vs[0]));
    if (rank_of(diffs, n) == diffs.size())
      basis.push_back(i);
    else
      diffs.pop_back();
  }
  auto img = [&](std::size_t k) {
    LatticeVector e(s, Integer(0));
    if (labels[k]) e[labels[k] - 1] = 1;
    return e;
  };
  std::vector<LatticeVector> dcols, lcols;
  for (std::size_t i = 1; i <= n; ++i) {
    dcols.push_back(sub(vs[basis[i]], vs[0]));
    lcols.push_back(sub(img(basis[i]), img(0)));
  }
  auto a = to_integer(to_rational(IntegerMatrix::from_columns(lcols, s)) *
                      *inverse(to_rational(IntegerMatrix::from_columns(dcols, n))));
  if (!a) throw CayleyError("labeling does not define a lattice map");
  return {*a, sub(img(0), a->apply(vs[0]))};
}

}  // namespace detail

/// Every Cayley structure of P with s+1 factors, as vertex labelings in P's
/// vertex order.
inline std::vector<std::vector<std::size_t>> enumerate_cayley_structures(const LatticePolytope& p, std::size_t s) {
  return detail::cayley_labelings(normalize_full_dim(p).polytope, s);
}

/// Smallest q such that P is a Cayley sum of polytopes in R^q, by exhaustive
/// search over vertex labelings. The witness uses the lexicographically
/// smallest labeling for the largest feasible s.
inline OracleResult minimal_cayley_codim(const LatticePolytope& p, std::size_t max_vertices = 10,
                                         bool verify_hstar = true) {
  if (p.num_vertices() > max_vertices)
    throw OracleBudgetExceeded("oracle refuses " + std::to_string(p.num_vertices()) + " vertices (budget " +
                               std::to_string(max_vertices) + ")");
  auto norm = normalize_full_dim(p);
  const std::size_t n = norm.polytope.ambient_dim();
  for (std::size_t s = n; s >= 1; --s) {
    auto found = detail::cayley_labelings(norm.polytope, s);
    if (found.empty()) continue;
    auto pi = detail::projection_for_labels(norm.polytope, s, found.front());
    return {n - s, decomposition_from_projection(p, compose(pi, norm.to_local), verify_hstar)};
  }
  return {n, decomposition_from_projection(p, {IntegerMatrix(0, p.ambient_dim()), {}}, verify_hstar)};
}

/// Whether some Cayley structure of P has a factor that is a single point.
inline bool admits_point_factor(const LatticePolytope& p, std::size_t max_vertices = 10) {
  if (p.num_vertices() > max_vertices) throw OracleBudgetExceeded("oracle budget exceeded");
  auto lp = normalize_full_dim(p).polytope;
  for (std::size_t s = 1; s <= lp.ambient_dim(); ++s)
    for (const auto& labels : detail::cayley_labelings(lp, s)) {
      std::vector<std::size_t> sizes(s + 1, 0);
      for (auto l : labels) ++sizes[l];
      if (std::find(sizes.begin(), sizes.end(), 1u) != sizes.end()) return true;
    }
  return false;
}

}  // namespace cayleykit
