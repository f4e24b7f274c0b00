#pragma once

// Deterministic corpus generation from JSON specs.
//
//   {"kind": "random_box", "dim": 3, "width": 4, "seed": 7, "count": 10}
//   {"kind": "cayley", "factors": [{"kind": "literal", ...}, ...]}
//
// Kinds: simplex, dilated_simplex, cube, box, cayley, pyramid, random_box,
// literal. A spec may also be an array of specs.

#include "cayleykit/ehrhart.hpp"
#include "cayleykit/json_io.hpp"
#include "cayleykit/polytope.hpp"
#include "cayleykit/shapes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cayleykit {

struct CorpusSpec {
  std::string kind;
  std::string name;  // prefix for generated names; kind-derived when empty
  std::size_t dim = 0;
  long dilation = 1;
  long width = 2;
  std::size_t max_points = 8;
  std::vector<long> widths;
  std::vector<CorpusSpec> factors;  // cayley factors, or the pyramid base
  std::vector<LatticeVector> vertices;  // literal
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::optional<std::size_t> max_degree;
};

namespace detail {

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("invalid field \"") + key + "\" in corpus spec");
  }
}

}  // namespace detail

inline CorpusSpec spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("corpus spec needs a \"kind\"");
  CorpusSpec s;
  s.kind = j["kind"].get<std::string>();
  s.name = detail::field_or<std::string>(j, "name", "");
  s.dim = detail::field_or<std::size_t>(j, "dim", 0);
  s.dilation = detail::field_or<long>(j, "dilation", 1);
  s.width = detail::field_or<long>(j, "width", 2);
  s.max_points = detail::field_or<std::size_t>(j, "max_points", 8);
  s.widths = detail::field_or<std::vector<long>>(j, "widths", {});
  s.seed = detail::field_or<std::uint64_t>(j, "seed", 0);
  s.count = detail::field_or<std::size_t>(j, "count", 1);
  if (j.contains("max_degree")) s.max_degree = detail::field_or<std::size_t>(j, "max_degree", 0);
  if (j.contains("factors")) {
    if (!j["factors"].is_array()) throw ParseError("\"factors\" must be an array");
    for (const auto& f : j["factors"]) s.factors.push_back(spec_from_json(f));
  }
  if (j.contains("base")) s.factors.push_back(spec_from_json(j["base"]));
  if (j.contains("vertices")) {
    if (!j["vertices"].is_array()) throw ParseError("\"vertices\" must be an array");
    for (const auto& v : j["vertices"]) s.vertices.push_back(vector_from_json(v));
  }
  return s;
}

inline std::vector<CorpusSpec> specs_from_json(const Json& j) {
  std::vector<CorpusSpec> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(spec_from_json(e));
  } else {
    out.push_back(spec_from_json(j));
  }
  return out;
}

namespace detail {

inline std::string member_name(const CorpusSpec& s, const std::string& fallback, std::size_t i) {
  std::string base = s.name.empty() ? fallback : s.name;
  return s.count == 1 ? base : base + "_" + std::to_string(i);
}

// One polytope for member i; `offset` shifts seeds so nested random factors
// differ between members.
inline LatticePolytope generate_one(const CorpusSpec& s, std::size_t i, std::uint64_t offset) {
  if (s.kind == "simplex") return standard_simplex(s.dim);
  if (s.kind == "dilated_simplex") return standard_simplex(s.dim, s.dilation);
  if (s.kind == "cube") return unit_cube(s.dim);
  if (s.kind == "box") return box(s.widths);
  if (s.kind == "literal") {
    if (s.vertices.empty()) throw ParseError("literal spec needs vertices");
    return LatticePolytope(s.vertices.front().size(), s.vertices, s.name);
  }
  if (s.kind == "random_box") {
    SeededRng rng(s.seed + offset + i * 0x9e3779b97f4a7c15ULL);
    return random_box_polytope(rng, s.dim, s.width, s.max_points);
  }
  if (s.kind == "pyramid") {
    if (s.factors.size() != 1) throw ParseError("pyramid spec needs one base");
    return lattice_pyramid(generate_one(s.factors.front(), i, offset));
  }
  if (s.kind == "cayley") {
    if (s.factors.empty()) throw ParseError("cayley spec needs factors");
    std::vector<LatticePolytope> fs;
    for (std::size_t j = 0; j < s.factors.size(); ++j) fs.push_back(generate_one(s.factors[j], i, offset + 7919 * (j + 1)));
    return cayley_sum(fs);
  }
  throw ParseError("unknown corpus kind \"" + s.kind + "\"");
}

inline std::string default_name(const CorpusSpec& s, const LatticePolytope& p) {
  if (s.kind == "random_box")
    return "random_box_d" + std::to_string(s.dim) + "_w" + std::to_string(s.width) + "_s" + std::to_string(s.seed);
  if (s.kind == "cayley") return "cayley_sum";
  if (s.kind == "literal") return "literal";
  return p.name();
}

}  // namespace detail

inline bool is_random(const CorpusSpec& s) {
  if (s.kind == "random_box") return true;
  for (const auto& f : s.factors)
    if (is_random(f)) return true;
  return false;
}

/// Fixed kinds give one polytope; random kinds give `count` members, with
/// members above `max_degree` resampled. A fixed polytope above `max_degree`
/// is dropped.
inline std::vector<LatticePolytope> generate(const CorpusSpec& s) {
  std::vector<LatticePolytope> out;
  if (!is_random(s)) {
    auto p = detail::generate_one(s, 0, 0);
    if (s.max_degree && degree(p) > *s.max_degree) return out;
    out.push_back(p.renamed(s.name.empty() ? detail::default_name(s, p) : s.name));
    return out;
  }
  const std::size_t attempt_limit = 200 * (s.count + 1);
  for (std::size_t attempt = 0; out.size() < s.count && attempt < attempt_limit; ++attempt) {
    auto p = detail::generate_one(s, attempt, 0);
    if (s.max_degree && degree(p) > *s.max_degree) continue;
    out.push_back(p.renamed(detail::member_name(s, detail::default_name(s, p), out.size())));
  }
  return out;
}

inline std::vector<LatticePolytope> generate(const std::vector<CorpusSpec>& specs) {
  std::vector<LatticePolytope> out;
  for (const auto& s : specs) {
    auto part = generate(s);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace cayleykit
