#pragma once

// Ehrhart counts, h*-polynomials and the derived degree/volume/Gorenstein data.
//
// h* is obtained from the counts f(0..n) by the finite-difference identity
//   h*_j = sum_{i=0}^{j} (-1)^i C(n+1, i) f(j - i),
// and every result is cross-checked against interior counts.

#include "cayleykit/enumerate.hpp"
#include "cayleykit/polytope.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cayleykit {

/// Raised when computed Ehrhart data violates one of its invariants; this
/// always indicates an enumeration bug.
class EhrhartError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct HStarData {
  std::vector<Integer> coefficients;  // h*_0 .. h*_d, trailing zeros trimmed
  std::size_t degree = 0;
  Integer leading;                    // h*_d
  Integer normalized_volume;
  std::size_t dim = 0;
  bool gorenstein = false;

  friend bool operator==(const HStarData&, const HStarData&) = default;
};

struct EhrhartCounts {
  std::vector<Integer> values;  // f(0) .. f(n)
};

/// h* from the counts f(0), ..., f(n) of an n-dimensional polytope, untrimmed.
inline std::vector<Integer> h_star_from_counts(const std::vector<Integer>& f) {
  const std::size_t n = f.size() - 1;
  std::vector<Integer> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i <= j; ++i) {
      Integer term = binomial(n + 1, i) * f[j - i];
      if (i % 2) s -= term; else s += term;
    }
    h[j] = s;
  }
  return h;
}

inline bool palindromic(const std::vector<Integer>& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != h[h.size() - 1 - i]) return false;
  return true;
}

/// Ehrhart computations for one polytope, memoizing counts. Lower-dimensional
/// inputs are moved into a lattice basis of their affine hull first; all
/// quantities refer to the polytope's own dimension.
class EhrhartCalculator {
 public:
  explicit EhrhartCalculator(const LatticePolytope& p)
      : polytope_(p), local_(normalize_full_dim(p).polytope), enumerator_(local_) {}

  std::size_t dim() const { return local_.dim(); }
  const LatticePolytope& polytope() const { return polytope_; }

  const Integer& count(std::uint64_t m) { return memo(counts_, m, false); }
  const Integer& count_interior(std::uint64_t m) { return memo(interior_, m, true); }
  bool has_interior_point(std::uint64_t m) {
    if (auto it = interior_.find(m); it != interior_.end()) return it->second > 0;
    return enumerator_.has_point(m, true);
  }

  EhrhartCounts counts() {
    EhrhartCounts c;
    for (std::uint64_t m = 0; m <= dim(); ++m) c.values.push_back(count(m));
    return c;
  }

  const HStarData& h_star() {
    if (!hstar_) hstar_ = compute_h_star();
    return *hstar_;
  }

  /// Degree from interior points alone: the largest d such that (n - d)P has
  /// no interior lattice point, found as n + 1 - min{m >= 1 : int(mP) != {}}.
  std::size_t degree_by_interior() {
    const std::size_t n = dim();
    for (std::uint64_t m = 1; m <= n + 1; ++m)
      if (has_interior_point(m)) return n + 1 - m;
    throw EhrhartError("(n+1)P has no interior lattice point");
  }

  /// Interpolates f as a degree-n polynomial from f(0..n) and checks
  /// #int(mP) == (-1)^n f(-m) for m = 1..3.
  bool reciprocity_check(std::uint64_t up_to = 3) {
    const std::size_t n = dim();
    auto f = counts().values;
    for (std::uint64_t m = 1; m <= up_to; ++m) {
      Rational at = 0;
      const long x = -static_cast<long>(m);
      for (std::size_t i = 0; i <= n; ++i) {
        Rational term = f[i];
        for (std::size_t j = 0; j <= n; ++j) {
          if (j == i) continue;
          long num = x - static_cast<long>(j), den = static_cast<long>(i) - static_cast<long>(j);
          if (den < 0) num = -num, den = -den;
          Rational r(num, den);
          r.canonicalize();
          term *= r;
        }
        at += term;
      }
      if (n % 2) at = -at;
      if (at != Rational(count_interior(m))) return false;
    }
    return true;
  }

 private:
  const Integer& memo(std::map<std::uint64_t, Integer>& cache, std::uint64_t m, bool interior) {
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, enumerator_.count(m, interior)).first;
    return it->second;
  }

  HStarData compute_h_star() {
    const std::size_t n = dim();
    auto h = h_star_from_counts(counts().values);
    HStarData out;
    out.dim = n;
    for (const auto& c : h)
      if (c < 0) throw EhrhartError("negative h* coefficient");
    if (h[0] != 1) throw EhrhartError("h*_0 != 1");
    std::size_t d = n;
    while (d > 0 && h[d] == 0) --d;
    h.resize(d + 1);
    out.degree = d;
    out.leading = h[d];
    out.normalized_volume = 0;
    for (const auto& c : h) out.normalized_volume += c;
    out.gorenstein = palindromic(h);
    out.coefficients = std::move(h);
    if (out.leading < 1) throw EhrhartError("leading h* coefficient < 1");
    if (count_interior(n - d + 1) != out.leading)
      throw EhrhartError("h*_d differs from the interior count of (n-d+1)P");
    if (n > d && count_interior(n - d) != 0) throw EhrhartError("(n-d)P has interior lattice points");
    return out;
  }

  LatticePolytope polytope_;
  LatticePolytope local_;
  LatticePointEnumerator enumerator_;
  std::map<std::uint64_t, Integer> counts_;
  std::map<std::uint64_t, Integer> interior_;
  std::optional<HStarData> hstar_;
};

inline Integer count(const LatticePolytope& p, std::uint64_t m) { return LatticePointEnumerator(p).count(m, false); }
inline Integer count_interior(const LatticePolytope& p, std::uint64_t m) {
  return LatticePointEnumerator(p).count(m, true);
}
inline HStarData h_star(const LatticePolytope& p) { return EhrhartCalculator(p).h_star(); }
inline std::size_t degree(const LatticePolytope& p) { return h_star(p).degree; }
inline std::size_t degree_by_interior(const LatticePolytope& p) { return EhrhartCalculator(p).degree_by_interior(); }
inline bool is_gorenstein(const LatticePolytope& p) { return h_star(p).gorenstein; }
inline bool ehrhart_reciprocity_check(const LatticePolytope& p) { return EhrhartCalculator(p).reciprocity_check(); }

}  // namespace cayleykit
