#include "cayleykit/ehrhart.hpp"
#include "cayleykit/shapes.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace cayleykit {
namespace {

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Counts by the naive bounding-box scan, then h* by an independently written
// difference table: h*(t) = (1 - t)^{n+1} * sum f(m) t^m truncated at degree n.
std::vector<Integer> oracle_h_star(const LatticePolytope& p) {
  const std::size_t n = p.ambient_dim();
  std::vector<std::pair<LatticeVector, Integer>> ineqs;
  for (const auto& f : facets(p).inequalities) ineqs.push_back({f.normal, f.offset});
  std::vector<Integer> series(n + 1);
  series[0] = 1;
  for (std::size_t m = 1; m <= n; ++m)
    series[m] = static_cast<unsigned long>(oracle::bounding_box_points(p.vertices(), ineqs, n, static_cast<long>(m), false).size());
  // multiply by (1 - t) n+1 times
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t i = n; i >= 1; --i) series[i] -= series[i - 1];
  while (series.size() > 1 && series.back() == 0) series.pop_back();
  return series;
}

TEST(Count, SimplexBinomials) {
  EXPECT_EQ(count(standard_simplex(3), 2), 10);
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned long m = 0; m <= 4; ++m) EXPECT_EQ(count(standard_simplex(n), m), binomial(m + n, n));
  EXPECT_EQ(count_interior(unit_cube(2), 2), 1);
  EXPECT_EQ(count(box({3, 2}), 0), 1);
}

TEST(HStar, UnitSquare) {
  auto h = h_star(unit_cube(2));
  EXPECT_EQ(h.coefficients, ints({1, 1}));
  EXPECT_EQ(h.degree, 1u);
  EXPECT_EQ(h.normalized_volume, 2);
  EXPECT_EQ(oracle_h_star(unit_cube(2)), ints({1, 1}));
}

TEST(HStar, TwiceSimplex3IsGorensteinDegreeTwo) {
  auto p = standard_simplex(3, 2);
  EhrhartCalculator calc(p);
  EXPECT_EQ(calc.counts().values, ints({1, 10, 35, 84}));
  auto h = calc.h_star();
  EXPECT_EQ(h.coefficients, ints({1, 6, 1}));
  EXPECT_EQ(h.degree, 2u);
  EXPECT_EQ(h.leading, 1);
  EXPECT_EQ(h.normalized_volume, 8);
  EXPECT_TRUE(h.gorenstein);
  EXPECT_EQ(oracle_h_star(p), ints({1, 6, 1}));
}

TEST(HStar, UnimodularSimplex) {
  for (std::size_t n = 0; n <= 5; ++n) {
    auto h = h_star(standard_simplex(n));
    EXPECT_EQ(h.coefficients, ints({1}));
    EXPECT_EQ(h.degree, 0u);
    EXPECT_EQ(h.normalized_volume, 1);
    EXPECT_TRUE(h.gorenstein);
  }
}

TEST(Degree, Examples) {
  for (long k = 2; k <= 6; ++k) {
    auto seg = segment(0, k);
    EXPECT_EQ(degree(seg), 1u);
    EXPECT_EQ(h_star(seg).coefficients, ints({1, k - 1}));
    EXPECT_EQ(degree_by_interior(seg), 1u);
  }
  EXPECT_EQ(degree(standard_simplex(4)), 0u);
  auto cube = h_star(unit_cube(3));
  EXPECT_EQ(cube.coefficients, ints({1, 4, 1}));
  EXPECT_EQ(cube.degree, 2u);
  EXPECT_EQ(EhrhartCalculator(unit_cube(3)).counts().values, ints({1, 8, 27, 64}));
}

TEST(Gorenstein, Flag) {
  EXPECT_TRUE(is_gorenstein(standard_simplex(3, 2)));
  EXPECT_FALSE(is_gorenstein(segment(0, 3)));
  EXPECT_TRUE(is_gorenstein(standard_simplex(4)));
}

TEST(Reciprocity, Examples) {
  EhrhartCalculator sq(unit_cube(2));
  EXPECT_TRUE(sq.reciprocity_check());
  EXPECT_EQ(sq.count_interior(1), 0);
  EXPECT_TRUE(ehrhart_reciprocity_check(standard_simplex(2)));
  EXPECT_TRUE(ehrhart_reciprocity_check(LatticePolytope(2, {lattice_vector({4, -1})})));
}

TEST(HStar, AgreesWithOracleOnRandomPolytopes) {
  SeededRng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 3));
    auto p = random_box_polytope(rng, n, n == 3 ? 3 : 5, 7);
    auto h = h_star(p);
    EXPECT_EQ(h.coefficients, oracle_h_star(p)) << "trial " << trial;
  }
}

TEST(HStar, InvariantsOnRandomCorpus) {
  SeededRng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
    auto p = random_box_polytope(rng, n, n == 4 ? 2 : 4, 8);
    EhrhartCalculator calc(p);
    const auto& h = calc.h_star();
    EXPECT_EQ(h.coefficients.front(), 1);
    Integer sum = 0;
    for (const auto& c : h.coefficients) {
      EXPECT_GE(c, 0);
      sum += c;
    }
    EXPECT_EQ(sum, h.normalized_volume);
    EXPECT_LE(h.degree, n);
    EXPECT_EQ(calc.degree_by_interior(), h.degree);
    EXPECT_EQ(calc.count_interior(n - h.degree + 1), h.leading);
    if (n > h.degree) {
      EXPECT_EQ(calc.count_interior(n - h.degree), 0);
    }
    EXPECT_TRUE(calc.reciprocity_check());
    // f strictly increasing for m >= 1
    auto f = calc.counts().values;
    for (std::size_t m = 1; m + 1 < f.size(); ++m) EXPECT_LT(f[m], f[m + 1]);
  }
}

TEST(HStar, SimplexVolumeMatchesDeterminant) {
  SeededRng rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
    std::vector<LatticeVector> vs;
    for (std::size_t i = 0; i <= n; ++i) {
      LatticeVector v(n);
      for (auto& x : v) x = rng.uniform(0, n <= 2 ? 4 : 2);
      vs.push_back(v);
    }
    IntegerMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = vs[i + 1][j] - vs[0][j];
    Integer det = determinant(d);
    if (det == 0) continue;
    if (det < 0) det = -det;
    EXPECT_EQ(h_star(LatticePolytope(n, vs)).normalized_volume, det);
  }
}

TEST(HStar, LatticePyramidInvariance) {
  SeededRng rng(34);
  for (int trial = 0; trial < 12; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 3));
    auto q = random_box_polytope(rng, n, 3, 6);
    EXPECT_EQ(h_star(lattice_pyramid(q)).coefficients, h_star(q).coefficients);
  }
}

TEST(HStar, LowerDimensionalUsesOwnDimension) {
  LatticePolytope diag(3, {lattice_vector({0, 0, 0}), lattice_vector({3, 3, 3})});
  auto h = h_star(diag);
  EXPECT_EQ(h.dim, 1u);
  EXPECT_EQ(h.coefficients, ints({1, 2}));
  LatticePolytope tri(3, {lattice_vector({0, 0, 1}), lattice_vector({2, 0, 1}), lattice_vector({0, 2, 1})});
  EXPECT_EQ(h_star(tri).coefficients, ints({1, 3}));
}

TEST(Degree, CayleySumsRespectFactorDimension) {
  SeededRng rng(35);
  for (int trial = 0; trial < 15; ++trial) {
    const auto q = static_cast<std::size_t>(rng.uniform(1, 2));
    const auto s = static_cast<std::size_t>(rng.uniform(1, 2));
    std::vector<LatticePolytope> fs;
    for (std::size_t j = 0; j <= s; ++j) fs.push_back(random_hull(rng, q, 3, 3));
    auto c = cayley_sum(fs);
    EXPECT_LE(degree(c), q);
  }
}

}  // namespace
}  // namespace cayleykit
