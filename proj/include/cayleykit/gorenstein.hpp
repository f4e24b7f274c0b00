#pragma once

// Gorenstein polytopes: the dual polytope through cone polarity, the
// involution check, and the linear Cayley bound q <= 2d - 1.

#include "cayleykit/cayley.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/enumerate.hpp"
#include "cayleykit/polytope.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cayleykit {

/// The Gorenstein condition failed where it was required.
class GorensteinError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct GorensteinCertificate {
  std::size_t index = 0;   // r = n + 1 - d
  std::size_t degree = 0;
  LatticeVector unique_interior_point;     // of rP, ambient coordinates
  std::vector<LatticeVector> cone_normals;  // primitive facet normals of the cone over local P
  LatticePolytope dual;                    // P*, full-dimensional
  AffineLatticeMap dual_embedding;         // Z^n -> hyperplane <u, x^> = 1 in Z^{n+1}
  HStarData hstar;
  HStarData dual_hstar;
};

/// Builds P* from the facet normals a_F of the cone over P, after checking
/// <a_F, x^> = 1 for the lifted unique interior point x^ of rP.
inline GorensteinCertificate gorenstein_dual(const LatticePolytope& p) {
  auto norm = normalize_full_dim(p);
  const auto& lp = norm.polytope;
  const std::size_t n = lp.ambient_dim();
  EhrhartCalculator calc(lp);
  const auto& h = calc.h_star();
  if (!h.gorenstein) throw std::invalid_argument("polytope is not Gorenstein");

  const std::size_t r = n + 1 - h.degree;
  auto interior = LatticePointEnumerator(lp).points(r, true);
  if (interior.size() != 1) throw GorensteinError("rP does not have a unique interior lattice point");
  if (r > 1 && calc.count_interior(r - 1) != 0) throw GorensteinError("(r-1)P has interior lattice points");
  LatticeVector xhat = interior.front();
  xhat.emplace_back(static_cast<unsigned long>(r));

  std::vector<LatticeVector> lifted;
  for (const auto& v : lp.vertices()) {
    auto l = v;
    l.emplace_back(1);
    lifted.push_back(std::move(l));
  }
  auto normals = cone_facets(lifted, n + 1);
  for (const auto& a : normals)
    if (dot(a, xhat) != 1)
      throw GorensteinError("facet normal " + to_string(a) + " pairs to " + dot(a, xhat).get_str() + " with x");

  auto dual_norm = normalize_full_dim(LatticePolytope(n + 1, normals));
  if (dual_norm.polytope.dim() != n) throw GorensteinError("dual polytope has the wrong dimension");
  auto dual_h = h_star(dual_norm.polytope);
  if (dual_h.degree != h.degree) throw GorensteinError("dual polytope has a different degree");
  if (!dual_h.gorenstein) throw GorensteinError("dual polytope is not Gorenstein");
  return {r,
          h.degree,
          LatticePointEnumerator(p).points(r, true).front(),
          std::move(normals),
          dual_norm.polytope.renamed(p.name().empty() ? "" : p.name() + "_dual"),
          dual_norm.to_ambient,
          h,
          dual_h};
}

/// An explicit lattice isomorphism from (P*)* onto P. With P* = u0 + B Z^n
/// inside the hyperplane, Psi = [B | u0] is unimodular and its transpose
/// sends the lifted vertices of P to the cone normals of P*, so the inverse
/// transpose carries (P*)* back to P at height one.
struct DualInvolution {
  LatticePolytope double_dual;
  AffineLatticeMap local;  // Z^n -> Z^n, onto the normalized P
  AffineLatticeMap to_p;   // Z^n -> ambient space of P
};

inline DualInvolution dual_involution(const LatticePolytope& p, const GorensteinCertificate& first) {
  const std::size_t n = first.dual.ambient_dim();
  auto second = gorenstein_dual(first.dual);
  IntegerMatrix psi(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j < n; ++j) psi(i, j) = first.dual_embedding.matrix(i, j);
    psi(i, n) = first.dual_embedding.translation[i];
  }
  IntegerMatrix back;
  try {
    back = unimodular_inverse(psi.transpose());
  } catch (const std::domain_error&) {
    throw GorensteinError("dual coordinates are not a lattice basis");
  }
  const auto& e2 = second.dual_embedding;  // Z^n -> Z^{n+1}, cone coordinates of P*
  IntegerMatrix lin = back * e2.matrix;
  LatticeVector shift = back.apply(e2.translation);
  for (std::size_t j = 0; j < n; ++j)
    if (lin(n, j) != 0) throw GorensteinError("double dual does not return to height one");
  if (shift[n] != 1) throw GorensteinError("double dual does not return to height one");
  IntegerMatrix m(n, n);
  LatticeVector t(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = lin(i, j);
    t[i] = shift[i];
  }
  AffineLatticeMap local{m, t};
  if (!local.unimodular()) throw GorensteinError("involution map is not unimodular");
  auto norm = normalize_full_dim(p);
  DualInvolution out{second.dual, local, compose(norm.to_ambient, local)};
  std::vector<LatticeVector> image;
  for (const auto& v : second.dual.vertices()) image.push_back(out.to_p(v));
  if (!LatticePolytope(p.ambient_dim(), image).same_vertex_set(p))
    throw GorensteinError("double dual is not carried onto P");
  return out;
}

inline DualInvolution dual_involution(const LatticePolytope& p) { return dual_involution(p, gorenstein_dual(p)); }

/// Sum of the fractional barycentric coefficients of the interior point,
/// for the pipeline frame built on the dual polytope.
inline Rational dual_fractional_sum(const GorensteinCertificate& c) {
  if (c.dual.dim() == 0) return 0;
  auto [emb, frame, st] = embed_and_frame(c.dual, c.degree, BoundMode::warn);
  return st.fractional_sum;
}

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

struct GorensteinBoundReport {
  std::size_t d = 0;
  std::size_t bound = 0;  // 2d - 1, clamped to 0 at d = 0
  std::optional<std::size_t> q_pipeline;
  std::optional<std::size_t> q_oracle;
  std::optional<std::size_t> q_best;
  Verdict status = Verdict::inconclusive;
  std::vector<std::string> notes;
};

/// Checks q <= 2d - 1 using the constructive pipeline and, within the vertex
/// budget, the exhaustive oracle. Without an exact minimum, a pipeline value
/// above the bound is inconclusive rather than a failure.
inline GorensteinBoundReport verify_gorenstein_cayley_bound(const LatticePolytope& p, std::size_t oracle_budget = 10) {
  GorensteinBoundReport r;
  auto h = h_star(p);
  if (!h.gorenstein) throw std::invalid_argument("polytope is not Gorenstein");
  r.d = h.degree;
  r.bound = r.d == 0 ? 0 : 2 * r.d - 1;
  if (r.d == 0) r.notes.push_back("bound 2d-1 clamped to 0 at degree 0");
  try {
    PipelineOptions opt;
    opt.mode = BoundMode::warn;
    opt.hstar = h;
    r.q_pipeline = run_pipeline(p, opt).decomposition.q;
  } catch (const std::exception& e) {
    r.notes.push_back(std::string("pipeline: ") + e.what());
  }
  if (p.num_vertices() <= oracle_budget) {
    r.q_oracle = minimal_cayley_codim(p, oracle_budget).q_star;
  } else {
    r.notes.push_back("oracle skipped: vertex budget exceeded");
  }
  if (r.q_pipeline) r.q_best = r.q_pipeline;
  if (r.q_oracle && (!r.q_best || *r.q_oracle < *r.q_best)) r.q_best = r.q_oracle;
  if (r.q_best && *r.q_best <= r.bound)
    r.status = Verdict::pass;
  else if (r.q_oracle)
    r.status = Verdict::fail;
  else
    r.status = Verdict::inconclusive;
  return r;
}

}  // namespace cayleykit
