#include "cayleykit/corpus.hpp"
#include "cayleykit/json_io.hpp"
#include "cayleykit/report.hpp"
#include "cayleykit/shapes.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace cayleykit {
namespace {

const std::filesystem::path fixtures = CAYLEYKIT_FIXTURE_DIR;

TEST(JsonIo, RoundTrip) {
  LatticePolytope p(2, {lattice_vector({0, 0}), lattice_vector({2, 0}), lattice_vector({0, 1}), lattice_vector({1, 1})},
                    "trapezoid");
  auto doc = parse_document(to_json(p).dump());
  EXPECT_TRUE(doc.polytope.same_vertex_set(p));
  EXPECT_EQ(doc.polytope.name(), "trapezoid");
  EXPECT_FALSE(doc.expected_hstar);
}

TEST(JsonIo, LargeIntegersAsStrings) {
  Integer big = Integer(1) << 53;
  EXPECT_TRUE(to_json(big).is_string());
  EXPECT_TRUE(to_json(Integer(-(big))).is_string());
  EXPECT_TRUE(to_json(Integer(big - 1)).is_number_integer());
  EXPECT_TRUE(to_json(Integer(1 - big)).is_number_integer());
  Integer huge("123456789012345678901234567890");
  LatticePolytope p(1, {LatticeVector{Integer(0)}, LatticeVector{huge}});
  Json j = to_json(p);
  EXPECT_EQ(j["vertices"][1][0], "123456789012345678901234567890");
  auto back = document_from_json(j).polytope;
  EXPECT_EQ(back.vertices()[1][0], huge);
  EXPECT_EQ(integer_from_json(Json("-42")), -42);
  EXPECT_EQ(integer_from_json(Json(7)), 7);
}

TEST(JsonIo, Rejects) {
  EXPECT_THROW(parse_document("{"), ParseError);
  EXPECT_THROW(parse_document("[]"), ParseError);
  EXPECT_THROW(parse_document(R"({"vertices": [[0]]})"), ParseError);
  EXPECT_THROW(parse_document(R"({"ambient_dim": 1, "vertices": []})"), ParseError);
  EXPECT_THROW(parse_document(R"({"ambient_dim": 2, "vertices": [[0, 0], [1]]})"), ParseError);
  EXPECT_THROW(parse_document(R"({"ambient_dim": 1, "vertices": [[0.5]]})"), ParseError);
  EXPECT_THROW(parse_document(R"({"ambient_dim": 1, "vertices": [["1x"]]})"), ParseError);
  EXPECT_THROW(parse_document(R"({"ambient_dim": 1, "vertices": [[0]], "name": 3})"), ParseError);
}

TEST(JsonIo, ExpectedHstarField) {
  auto doc = read_document((fixtures / "negative" / "corrupted_hstar.json").string());
  ASSERT_TRUE(doc.expected_hstar);
  EXPECT_EQ(*doc.expected_hstar, (std::vector<Integer>{1, 5, 1}));
}

TEST(Corpus, FixedKinds) {
  auto cube = generate(spec_from_json(Json::parse(R"({"kind": "cube", "dim": 3})")));
  ASSERT_EQ(cube.size(), 1u);
  EXPECT_EQ(cube[0].num_vertices(), 8u);
  auto trap = generate(spec_from_json(Json::parse(
      R"({"kind": "cayley", "factors": [{"kind": "literal", "vertices": [[0], [2]]},
                                         {"kind": "literal", "vertices": [[0], [1]]}]})")));
  ASSERT_EQ(trap.size(), 1u);
  LatticePolytope expect(2, {lattice_vector({0, 0}), lattice_vector({2, 0}), lattice_vector({0, 1}), lattice_vector({1, 1})});
  EXPECT_TRUE(trap[0].same_vertex_set(expect));
  auto pyr = generate(spec_from_json(Json::parse(R"({"kind": "pyramid", "base": {"kind": "cube", "dim": 2}})")));
  EXPECT_EQ(pyr[0].dim(), 3u);
  EXPECT_EQ(pyr[0].num_vertices(), 5u);
  auto dropped = generate(spec_from_json(Json::parse(R"({"kind": "cube", "dim": 5, "max_degree": 3})")));
  EXPECT_TRUE(dropped.empty());
  EXPECT_THROW(generate(spec_from_json(Json::parse(R"({"kind": "sphere"})"))), ParseError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"dim": 2})")), ParseError);
}

TEST(Corpus, RandomIsReproducible) {
  auto spec = spec_from_json(Json::parse(R"({"kind": "random_box", "dim": 3, "width": 4, "seed": 7, "count": 5})"));
  auto a = generate(spec), b = generate(spec);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].vertices(), b[i].vertices());
    EXPECT_EQ(a[i].name(), b[i].name());
    EXPECT_TRUE(a[i].full_dimensional());
    EXPECT_LE(a[i].num_vertices(), 8u);
  }
  spec.seed = 8;
  EXPECT_NE(generate(spec)[0].vertices(), a[0].vertices());
}

TEST(Corpus, DegreeFilterResamples) {
  auto spec = spec_from_json(
      Json::parse(R"({"kind": "random_box", "dim": 3, "width": 3, "seed": 1, "count": 6, "max_degree": 1})"));
  auto ps = generate(spec);
  EXPECT_EQ(ps.size(), 6u);
  for (const auto& p : ps) EXPECT_LE(degree(p), 1u);
}

TEST(Report, NegativeControlFails) {
  VerifyOptions opt;
  opt.jobs = 1;
  auto rep = run_verify_all(fixtures / "negative", opt);
  ASSERT_EQ(rep.records.size(), 2u);
  EXPECT_EQ(rep.exit_code, 2);
  EXPECT_EQ(rep.records[0].json["file"], "corrupted_hstar.json");
  EXPECT_EQ(rep.records[0].json["verdicts"]["expected_hstar"], "fail");
  EXPECT_EQ(rep.records[0].status, Status::fail);
  EXPECT_EQ(rep.records[1].json["verdicts"]["expected_hstar"], "pass");
  EXPECT_EQ(rep.records[1].status, Status::pass);
  EXPECT_EQ(rep.summary["fail"], 1);
}

TEST(Report, ParseFailuresAreRecorded) {
  auto rep = run_verify_all(fixtures / "malformed");
  ASSERT_EQ(rep.records.size(), 3u);
  EXPECT_EQ(rep.exit_code, 3);
  EXPECT_EQ(rep.records[0].json["verdicts"]["parse"], "inconclusive");
  EXPECT_EQ(rep.records[1].status, Status::pass);
  EXPECT_EQ(rep.records[2].json["verdicts"]["parse"], "inconclusive");
}

TEST(Report, EmptyCorpus) {
  auto rep = run_verify_all(fixtures / "empty");
  EXPECT_TRUE(rep.records.empty());
  EXPECT_EQ(rep.exit_code, 0);
  EXPECT_EQ(rep.jsonl().find('\n'), rep.jsonl().size() - 1);
}

TEST(Report, RecordContents) {
  PolytopeDocument doc{standard_simplex(3, 2), std::nullopt};
  auto r = verify_document(doc, "s.json");
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.json["d"], 2);
  EXPECT_EQ(r.json["q_pipeline"], 3);
  EXPECT_EQ(r.json["q_oracle"], 3);
  EXPECT_EQ(r.json["verdicts"]["q <= 2d-1"], "pass");
  EXPECT_EQ(r.json["verdicts"]["dual_involution"], "pass");
  EXPECT_FALSE(r.json.contains("timings"));
  for (const auto& [name, v] : r.json["verdicts"].items())
    EXPECT_TRUE(v == "pass" || v == "fail" || v == "inconclusive") << name;
}

TEST(Report, ThreadCountDoesNotChangeBytes) {
  VerifyOptions one, many;
  one.jobs = 1;
  many.jobs = 4;
  EXPECT_EQ(run_verify_all(fixtures / "negative", one).jsonl(), run_verify_all(fixtures / "negative", many).jsonl());
}

}  // namespace
}  // namespace cayleykit
