#pragma once

// Polytope JSON documents and JSON views of the result types. Integers with
// |v| >= 2^53 are written as strings; both forms are accepted on input.

#include "cayleykit/bounds.hpp"
#include "cayleykit/cayley.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/gorenstein.hpp"
#include "cayleykit/polytope.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cayleykit {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json to_json(const Integer& v) {
  static const Integer limit = Integer(1) << 53;
  if (abs(v) < limit) return Json(v.get_si());
  return Json(v.get_str());
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    Integer v;
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    bool digits = s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos;
    if (!digits || v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw ParseError("not an integer: \"" + s + "\"");
    return v;
  }
  throw ParseError("expected an integer, got " + j.dump());
}

inline Json to_json(const LatticeVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline LatticeVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of integers, got " + j.dump());
  LatticeVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  return v;
}

inline Json to_json(const IntegerMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json to_json(const AffineLatticeMap& f) { return Json{{"matrix", to_json(f.matrix)}, {"translation", to_json(f.translation)}}; }

inline Json to_json(const LatticePolytope& p) {
  Json j;
  if (!p.name().empty()) j["name"] = p.name();
  j["ambient_dim"] = p.ambient_dim();
  Json vs = Json::array();
  for (const auto& v : p.vertices()) vs.push_back(to_json(v));
  j["vertices"] = std::move(vs);
  return j;
}

/// A polytope document; `expected_hstar` is an optional fixture field that
/// verification compares against the computed h*.
struct PolytopeDocument {
  LatticePolytope polytope;
  std::optional<std::vector<Integer>> expected_hstar;
};

inline PolytopeDocument document_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("polytope document must be an object");
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer() || j["ambient_dim"].get<std::int64_t>() < 0)
    throw ParseError("missing or invalid \"ambient_dim\"");
  if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
    throw ParseError("missing or empty \"vertices\"");
  const auto n = static_cast<std::size_t>(j["ambient_dim"].get<std::int64_t>());
  std::vector<LatticeVector> pts;
  for (const auto& v : j["vertices"]) {
    auto x = vector_from_json(v);
    if (x.size() != n) throw ParseError("vertex " + v.dump() + " does not have " + std::to_string(n) + " coordinates");
    pts.push_back(std::move(x));
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("\"name\" must be a string");
    name = j["name"].get<std::string>();
  }
  std::optional<std::vector<Integer>> expected;
  if (j.contains("expected_hstar")) expected = vector_from_json(j["expected_hstar"]);
  return {LatticePolytope(n, std::move(pts), std::move(name)), std::move(expected)};
}

inline PolytopeDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return document_from_json(j);
}

inline PolytopeDocument read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

inline LatticePolytope read_polytope(const std::string& path) { return read_document(path).polytope; }

inline Json to_json(const HStarData& h) {
  Json c = Json::array();
  for (const auto& x : h.coefficients) c.push_back(to_json(x));
  return Json{{"hstar", c},          {"degree", h.degree}, {"leading", to_json(h.leading)},
              {"volume", to_json(h.normalized_volume)}, {"dim", h.dim},       {"gorenstein", h.gorenstein}};
}

inline Json to_json(const BoundCheck& c) {
  return Json{{"name", c.name},
              {"lhs", to_json(c.lhs)},
              {"rhs", to_json(c.rhs)},
              {"holds", c.holds},
              {"warning_only", c.warning_only}};
}

inline Json to_json(const std::vector<BoundCheck>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

inline Json to_json(const CayleyDecomposition& d) {
  Json fs = Json::array();
  for (const auto& f : d.factors) fs.push_back(to_json(f));
  return Json{{"q", d.q},
              {"s", d.s},
              {"projection", to_json(d.projection)},
              {"factors", std::move(fs)},
              {"witness_iso", to_json(d.witness_iso)},
              {"labels", d.labels}};
}

inline Json to_json(const PipelineRun& r) {
  Json j = to_json(r.decomposition);
  j["degree"] = r.degree;
  j["short_circuit"] = r.short_circuit;
  j["frame_vertices"] = r.frame_vertices;
  j["f3_bound_held"] = r.f3_bound_held();
  j["checks"] = to_json(r.checks);
  return j;
}

inline Json to_json(const GorensteinCertificate& c) {
  Json normals = Json::array();
  for (const auto& a : c.cone_normals) normals.push_back(to_json(a));
  return Json{{"index", c.index},
              {"degree", c.degree},
              {"unique_interior_point", to_json(c.unique_interior_point)},
              {"cone_normals", std::move(normals)},
              {"dual", to_json(c.dual)},
              {"dual_embedding", to_json(c.dual_embedding)},
              {"hstar", to_json(c.hstar)},
              {"dual_hstar", to_json(c.dual_hstar)}};
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return Json();
  if constexpr (std::is_same_v<T, Integer>)
    return to_json(*v);
  else
    return Json(*v);
}

inline Json to_json(const GorensteinBoundReport& r) {
  return Json{{"d", r.d},
              {"bound", r.bound},
              {"q_pipeline", optional_json(r.q_pipeline)},
              {"q_oracle", optional_json(r.q_oracle)},
              {"q_best", optional_json(r.q_best)},
              {"status", to_string(r.status)},
              {"notes", r.notes}};
}

inline Json to_json(const BoundReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json e{{"name", v.name}, {"status", to_string(v.status)}};
    if (!v.note.empty()) e["note"] = v.note;
    verdicts.push_back(std::move(e));
  }
  return Json{{"d", r.d},
              {"k", to_json(r.k)},
              {"n", r.n},
              {"N", to_json(r.N)},
              {"cayley_bound", to_json(r.cayley_bound_value)},
              {"volume_bound_digits", to_json(r.volume_bound_digits)},
              {"volume_bound_branch", optional_json(r.volume_bound_branch)},
              {"C", optional_json(r.C_value)},
              {"q", optional_json(r.q)},
              {"volume", to_json(r.volume)},
              {"verdicts", std::move(verdicts)}};
}

}  // namespace cayleykit
