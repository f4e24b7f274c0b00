// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// The corpus directory comes from CAYLEYKIT_CORPUS_DIR (environment), falling
// back to the path configured at build time.

#include "cayleykit/bounds.hpp"
#include "cayleykit/cayley.hpp"
#include "cayleykit/corpus.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/enumerate.hpp"
#include "cayleykit/gorenstein.hpp"
#include "cayleykit/json_io.hpp"
#include "cayleykit/report.hpp"
#include "cayleykit/shapes.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cayleykit;
using boost::multiprecision::cpp_int;

namespace {

std::filesystem::path corpus_dir() {
  if (const char* s = std::getenv("CAYLEYKIT_CORPUS_DIR")) return s;
  return CAYLEYKIT_DEFAULT_CORPUS_DIR;
}

struct Corpus {
  std::vector<std::string> files;
  std::vector<LatticePolytope> polytopes;
  std::vector<HStarData> hstars;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus c;
    for (const auto& f : corpus_files(corpus_dir())) {
      c.files.push_back(f.filename().string());
      c.polytopes.push_back(read_polytope(f.string()));
      c.hstars.push_back(h_star(c.polytopes.back()));
    }
    return c;
  }();
  return c;
}

// Collects failure messages for one criterion; prints at most a few.
struct Outcome {
  std::vector<std::string> failures;
  std::string info;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

// Lattice points of m * P for boxes and dilated standard simplices, by
// scanning a bounding box against the defining inequalities.
long count_box(const std::vector<long>& widths, long m) {
  long c = 1;
  for (long w : widths) c *= w * m + 1;
  return c;
}

long count_simplex(std::size_t n, long dil, long m) {
  long c = 0;
  std::vector<long> x(n, 0);
  const long t = dil * m;
  for (;;) {
    long s = 0;
    for (long v : x) s += v;
    if (s <= t) ++c;
    std::size_t i = 0;
    while (i < n && x[i] == t) x[i++] = 0;
    if (i == n) break;
    ++x[i];
  }
  return c;
}

// h* from f(0..n) by finite differences: h*_j = sum_i (-1)^i C(n+1, i) f(j - i).
std::vector<long> hstar_from(const std::vector<long>& f) {
  const long n = static_cast<long>(f.size()) - 1;
  std::vector<long> h;
  for (long j = 0; j <= n; ++j) {
    long s = 0, b = 1;
    for (long i = 0; i <= j; ++i) {
      s += (i % 2 ? -1 : 1) * b * f[j - i];
      b = b * (n + 1 - i) / (i + 1);
    }
    h.push_back(s);
  }
  while (h.size() > 1 && h.back() == 0) h.pop_back();
  return h;
}

std::vector<Integer> to_integers(const std::vector<long>& v) { return {v.begin(), v.end()}; }

Outcome c1_hstar() {
  Outcome o;
  std::vector<long> fs, fc, ft;
  for (long m = 0; m <= 2; ++m) fs.push_back(count_box({1, 1}, m));
  for (long m = 0; m <= 3; ++m) fc.push_back(count_box({1, 1, 1}, m));
  for (long m = 0; m <= 3; ++m) ft.push_back(count_simplex(3, 2, m));
  o.expect(hstar_from(fs) == std::vector<long>{1, 1}, "oracle h*(unit square)");
  o.expect(hstar_from(fc) == std::vector<long>{1, 4, 1}, "oracle h*(cube)");
  o.expect(hstar_from(ft) == std::vector<long>{1, 6, 1}, "oracle h*(2 simplex)");
  auto hs = h_star(unit_cube(2));
  auto hc = h_star(unit_cube(3));
  auto ht = h_star(standard_simplex(3, 2));
  o.expect(hs.coefficients == to_integers(hstar_from(fs)), "h*(unit square) = (1,1)");
  o.expect(hc.coefficients == to_integers(hstar_from(fc)), "h*(unit cube 3) = (1,4,1)");
  o.expect(ht.coefficients == to_integers(hstar_from(ft)), "h*(2 simplex 3) = (1,6,1)");
  o.expect(ht.degree == 2, "degree(2 simplex 3) = 2");
  o.expect(ht.normalized_volume == 8, "Vol(2 simplex 3) = 8");
  o.expect(ht.gorenstein, "2 simplex 3 is Gorenstein");
  return o;
}

// Ehrhart polynomial from f(0..n) by Lagrange interpolation, evaluated at t.
Rational interpolate(const std::vector<Integer>& f, long t) {
  const long n = static_cast<long>(f.size()) - 1;
  Rational s = 0;
  for (long i = 0; i <= n; ++i) {
    Rational term = f[i];
    for (long j = 0; j <= n; ++j) {
      if (j == i) continue;
      Rational r(t - j, 1);
      r /= Rational(i - j, 1);
      term *= r;
    }
    s += term;
  }
  return s;
}

Outcome c2_reciprocity() {
  Outcome o;
  SeededRng rng(20260101);
  for (int t = 0; t < 200; ++t) {
    const auto dim = static_cast<std::size_t>(rng.uniform(1, 4));
    const long width = rng.uniform(1, 6);
    auto p = random_box_polytope(rng, dim, width, 8);
    LatticePointEnumerator e(p);
    std::vector<Integer> f;
    for (std::uint64_t m = 0; m <= dim; ++m) f.push_back(e.count(m, false));
    for (long m = 1; m <= 3; ++m) {
      Rational lhs = e.count(static_cast<std::uint64_t>(m), true);
      Rational rhs = interpolate(f, -m);
      if (dim % 2) rhs = -rhs;
      o.expect(lhs == rhs, "reciprocity at m = " + std::to_string(m) + " for polytope " + std::to_string(t));
    }
  }
  o.info = "200 polytopes";
  return o;
}

Outcome c3_cayley_degree() {
  Outcome o;
  SeededRng rng(31337);
  for (int t = 0; t < 100; ++t) {
    const auto q = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto s = static_cast<std::size_t>(rng.uniform(1, 3));
    std::vector<LatticePolytope> fs;
    for (std::size_t j = 0; j <= s; ++j) fs.push_back(random_hull(rng, q, 2, static_cast<std::size_t>(rng.uniform(1, 4))));
    auto p = cayley_sum(fs);
    auto d = degree(p);
    o.expect(d <= q, "degree " + std::to_string(d) + " > q = " + std::to_string(q) + " for sum " + std::to_string(t));
  }
  o.info = "100 Cayley sums";
  return o;
}

Outcome c4_pipeline() {
  Outcome o;
  const auto& c = corpus();
  o.expect(c.polytopes.size() >= 300, "corpus has at least 300 polytopes");
  std::size_t checked = 0;
  for (std::size_t i = 0; i < c.polytopes.size(); ++i) {
    const auto& p = c.polytopes[i];
    const auto& h = c.hstars[i];
    o.expect(p.dim() <= 5 && h.degree <= 3, c.files[i] + ": dim <= 5 and degree <= 3");
    PipelineOptions opt;
    opt.mode = BoundMode::hard;
    opt.hstar = h;
    try {
      auto run = run_pipeline(p, opt);
      ++checked;
      for (const auto& ch : run.checks)
        if (!ch.warning_only) o.expect(ch.holds, c.files[i] + ": " + ch.name);
      const auto q = run.decomposition.q;
      if (run.f3_bound_held()) o.expect(Integer(static_cast<unsigned long>(q)) <= cayley_bound(h.degree), c.files[i] + ": q <= (d^2+19d-4)/2");
      o.expect(q <= p.dim(), c.files[i] + ": q <= n");
    } catch (const CayleyBoundViolation& e) {
      o.expect(false, c.files[i] + ": " + e.what());
    } catch (const std::exception& e) {
      o.expect(false, c.files[i] + ": decomposition failed: " + e.what());
    }
  }
  o.info = std::to_string(checked) + "/" + std::to_string(c.polytopes.size()) + " decompositions verified";
  return o;
}

Outcome c5_oracle() {
  Outcome o;
  const auto& c = corpus();
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.polytopes.size(); ++i) {
    const auto& p = c.polytopes[i];
    if (p.num_vertices() > 8) continue;
    ++n;
    auto qs = minimal_cayley_codim(p, 8).q_star;
    PipelineOptions opt;
    opt.mode = BoundMode::warn;
    opt.hstar = c.hstars[i];
    auto q = run_pipeline(p, opt).decomposition.q;
    o.expect(qs >= c.hstars[i].degree, c.files[i] + ": q* >= degree");
    o.expect(q >= qs, c.files[i] + ": q >= q*");
  }
  o.info = std::to_string(n) + " polytopes with <= 8 vertices";
  return o;
}

Outcome c6_tightness() {
  Outcome o;
  o.expect(minimal_cayley_codim(standard_simplex(1, 2)).q_star == 1, "q*(2 simplex 1) = 1");
  o.expect(minimal_cayley_codim(standard_simplex(3, 2)).q_star == 3, "q*(2 simplex 3) = 3");
  return o;
}

Outcome c7_duality() {
  Outcome o;
  std::vector<LatticePolytope> family;
  const auto& c = corpus();
  for (std::size_t i = 0; i < c.files.size(); ++i)
    if (c.files[i].rfind("reflexive_", 0) == 0) family.push_back(c.polytopes[i]);
  o.expect(family.size() == 16, "16 reflexive polygons in the corpus");
  family.push_back(standard_simplex(1, 2));
  family.push_back(standard_simplex(3, 2));
  for (std::size_t n = 1; n <= 4; ++n) family.push_back(unit_cube(n));
  for (const auto& p : family) {
    const std::string tag = p.name();
    try {
      auto cert = gorenstein_dual(p);
      auto xhat = cert.unique_interior_point;
      xhat.emplace_back(static_cast<unsigned long>(cert.index));
      for (const auto& a : cert.cone_normals) o.expect(dot(a, xhat) == 1, tag + ": <a_F, x> = 1");
      o.expect(h_star(cert.dual).degree == h_star(p).degree, tag + ": degree preserved");
      o.expect(cert.dual.dim() == p.dim(), tag + ": dimension preserved");
      auto inv = dual_involution(p, cert);
      o.expect(inv.local.unimodular(), tag + ": involution map unimodular");
      std::vector<LatticeVector> image;
      for (const auto& v : inv.double_dual.vertices()) image.push_back(inv.to_p(v));
      o.expect(LatticePolytope(p.ambient_dim(), image).same_vertex_set(p), tag + ": (P*)* carried onto P");
    } catch (const std::exception& e) {
      o.expect(false, tag + ": " + e.what());
    }
  }
  o.info = std::to_string(family.size()) + " polytopes";
  return o;
}

cpp_int cpp_pow(cpp_int b, unsigned long e) {
  cpp_int r = 1;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Outcome c8_formulas() {
  Outcome o;
  o.expect(cayley_bound(1) == 8, "cayley_bound(1) = 8");
  o.expect(cayley_bound(2) == 19, "cayley_bound(2) = 19");
  o.expect(lz_cube_constant(1, 1) == 38416, "lz_cube_constant(1,1) = 38416");
  o.expect(gorenstein_volume_bound(1) == 38416, "gorenstein_volume_bound(1) = 38416");
  cpp_int fact8 = 1;
  for (unsigned i = 2; i <= 8; ++i) fact8 *= i;
  const std::string oracle = (cpp_pow(8, 8) * cpp_pow(fact8, 9) * cpp_pow(14, 32768)).str();
  const std::string value = volume_bound(1, 1).get_str();
  o.expect(value.size() == oracle.size(), "volume_bound(1,1) digit count");
  o.expect(value.substr(0, 20) == oracle.substr(0, 20), "volume_bound(1,1) leading 20 digits");
  o.expect(value == oracle, "volume_bound(1,1) exact");
  o.expect(volume_bound_digits(1, 1) == static_cast<unsigned long>(oracle.size()), "digit-count mode agrees");
  o.info = std::to_string(oracle.size()) + " digits, leading " + oracle.substr(0, 20);
  return o;
}

Outcome c9_volume_bound() {
  Outcome o;
  const auto& c = corpus();
  for (std::size_t i = 0; i < c.polytopes.size(); ++i) {
    auto r = check_volume_bound(c.polytopes[i], std::nullopt, c.hstars[i]);
    for (const auto& v : r.verdicts) o.expect(v.status != CheckStatus::fail, c.files[i] + ": " + v.name);
  }
  o.info = std::to_string(c.polytopes.size()) + " polytopes";
  return o;
}

Outcome c10_determinism() {
  Outcome o;
  VerifyOptions a, b;
  a.jobs = 0;
  b.jobs = 1;
  auto r1 = run_verify_all(corpus_dir(), a).jsonl();
  auto r2 = run_verify_all(corpus_dir(), b).jsonl();
  o.expect(r1 == r2, "verify-all reports byte-identical");
  o.info = std::to_string(r1.size()) + " bytes";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "h*-exactness", 1, c1_hstar},
      {2, "Ehrhart reciprocity suite", 120, c2_reciprocity},
      {3, "Cayley degree bound", 120, c3_cayley_degree},
      {4, "constructive pipeline validity", 600, c4_pipeline},
      {5, "oracle agreement", 600, c5_oracle},
      {6, "tightness of q <= 2d-1", 60, c6_tightness},
      {7, "Gorenstein duality", 120, c7_duality},
      {8, "bound formulas", 60, c8_formulas},
      {9, "volume bound on corpus", 60, c9_volume_bound},
      {10, "verify-all determinism", 600, c10_determinism},
  };
  std::cout << "corpus: " << corpus_dir().string() << "\n";
  // corpus loading is not charged to the first criterion that touches it
  (void)corpus();
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.limit_seconds;
    bool ok = o.failures.empty() && in_time;
    if (!ok) ++failed;
    std::ostringstream line;
    line << "criterion " << std::setw(2) << c.id << " " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  ("
         << std::fixed << std::setprecision(2) << secs << " s, limit " << c.limit_seconds << " s)";
    if (!o.info.empty()) line << "  " << o.info;
    std::cout << line.str() << "\n";
    if (!in_time) std::cout << "    runtime limit exceeded\n";
    for (std::size_t i = 0; i < o.failures.size() && i < 10; ++i) std::cout << "    " << o.failures[i] << "\n";
    if (o.failures.size() > 10) std::cout << "    ... " << o.failures.size() - 10 << " more\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
