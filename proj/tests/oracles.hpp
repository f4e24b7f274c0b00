#pragma once

// Independent brute-force oracles. Nothing here calls the double
// description, the enumerator, or the finite-difference code under test.

#include "cayleykit/arith.hpp"
#include "cayleykit/matrix.hpp"
#include "cayleykit/polytope.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

namespace cayleykit::oracle {

/// Facets of a full-dimensional polytope by trying every n-subset of vertices.
inline std::set<std::pair<LatticeVector, Integer>> brute_force_facets(const std::vector<LatticeVector>& vs,
                                                                      std::size_t n) {
  std::set<std::pair<LatticeVector, Integer>> out;
  std::vector<std::size_t> idx(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) {
    if (k == n) {
      IntegerMatrix d(n - 1, n);
      for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i - 1, j) = vs[idx[i]][j] - vs[idx[0]][j];
      if (n > 1 && rank(d) != n - 1) return;
      // normal spanning the 1-dim kernel, via cofactors
      LatticeVector normal(n);
      for (std::size_t j = 0; j < n; ++j) {
        IntegerMatrix minor(n - 1, n - 1);
        for (std::size_t r = 0; r + 1 < n; ++r)
          for (std::size_t c = 0, cc = 0; c < n; ++c)
            if (c != j) minor(r, cc++) = d(r, c);
        normal[j] = determinant(minor) * ((j % 2) ? -1 : 1);
      }
      normal = make_primitive(normal);
      Integer off = dot(normal, vs[idx[0]]);
      bool le = true, ge = true;
      for (const auto& v : vs) {
        Integer t = dot(normal, v);
        if (t > off) le = false;
        if (t < off) ge = false;
      }
      if (le) out.insert({normal, off});
      if (ge) {
        LatticeVector neg = normal;
        for (auto& x : neg) x = -x;
        out.insert({neg, -off});
      }
      return;
    }
    for (std::size_t i = start; i < vs.size(); ++i) {
      idx[k] = i;
      rec(k + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Naive scan of the bounding box of mP, testing every candidate against
/// every inequality (strictly for the interior variant).
inline std::vector<LatticeVector> bounding_box_points(const std::vector<LatticeVector>& vs,
                                                      const std::vector<std::pair<LatticeVector, Integer>>& ineqs,
                                                      std::size_t n, long m, bool interior) {
  std::vector<long> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = hi[i] = vs[0][i].get_si() * m;
    for (const auto& v : vs) {
      lo[i] = std::min(lo[i], v[i].get_si() * m);
      hi[i] = std::max(hi[i], v[i].get_si() * m);
    }
  }
  std::vector<LatticeVector> out;
  std::vector<long> x = lo;
  for (;;) {
    bool ok = true;
    for (const auto& [a, b] : ineqs) {
      long s = 0;
      for (std::size_t i = 0; i < n; ++i) s += a[i].get_si() * x[i];
      long rhs = b.get_si() * m;
      if (s > rhs || (interior && s == rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      LatticeVector p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = x[i];
      out.push_back(p);
    }
    std::size_t k = n;
    while (k > 0 && x[k - 1] == hi[k - 1]) {
      x[k - 1] = lo[k - 1];
      --k;
    }
    if (k == 0) break;
    ++x[k - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::pair<LatticeVector, Integer>> as_pairs(const std::set<std::pair<LatticeVector, Integer>>& s) {
  return {s.begin(), s.end()};
}

}  // namespace cayleykit::oracle
