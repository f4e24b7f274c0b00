#include "cayleykit/bounds.hpp"
#include "cayleykit/cayley.hpp"
#include "cayleykit/corpus.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/gorenstein.hpp"
#include "cayleykit/json_io.hpp"
#include "cayleykit/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

using namespace cayleykit;

namespace {

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_hstar(const std::string& file) {
  auto p = read_polytope(file);
  Json j{{"name", p.name()}};
  j.update(to_json(h_star(p)));
  print(j);
  return 0;
}

int cmd_degree(const std::string& file) {
  auto h = h_star(read_polytope(file));
  print(Json{{"degree", h.degree}});
  return 0;
}

int cmd_volume(const std::string& file) {
  auto h = h_star(read_polytope(file));
  print(Json{{"volume", to_json(h.normalized_volume)}});
  return 0;
}

int cmd_decompose(const std::string& file, bool oracle, const std::string& mode) {
  auto p = read_polytope(file);
  PipelineOptions opt;
  opt.mode = mode == "warn" ? BoundMode::warn : BoundMode::hard;
  try {
    auto run = run_pipeline(p, opt);
    Json j = to_json(run);
    if (oracle) j["q_oracle"] = minimal_cayley_codim(p).q_star;
    print(j);
    return run.all_hard_checks_hold() ? 0 : 2;
  } catch (const CayleyBoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return 2;
  }
}

int cmd_oracle(const std::string& file, std::size_t max_vertices) {
  auto p = read_polytope(file);
  auto r = minimal_cayley_codim(p, max_vertices);
  print(Json{{"q_star", r.q_star}, {"witness", to_json(r.witness)}});
  return 0;
}

int cmd_gorenstein_dual(const std::string& file) {
  auto p = read_polytope(file);
  auto c = gorenstein_dual(p);
  auto inv = dual_involution(p, c);
  Json j = to_json(c);
  j["involution"] = to_json(inv.to_p);
  j["dual_fractional_sum"] = dual_fractional_sum(c).get_str();
  print(j);
  return 0;
}

int cmd_gorenstein_bound(const std::string& file, std::size_t budget) {
  auto r = verify_gorenstein_cayley_bound(read_polytope(file), budget);
  print(to_json(r));
  return r.status == Verdict::pass ? 0 : r.status == Verdict::fail ? 2 : 3;
}

int cmd_bounds_eval(std::size_t d, unsigned long k, bool exact) {
  Json j{{"d", d}, {"k", k}, {"N", to_json(cayley_bound(d))}, {"cayley_bound", to_json(cayley_bound(d))}};
  if (d >= 1) {
    auto vb = volume_bound_expression(d, k);
    j["volume_bound_branch"] = vb.branch;
    j["volume_bound_digits"] = to_json(digit_count(vb.product));
    auto gb = gorenstein_volume_bound_expression(d);
    j["gorenstein_volume_bound_digits"] = to_json(digit_count(gb.product));
    if (exact) {
      j["volume_bound"] = evaluate(vb.product).get_str();
      j["gorenstein_volume_bound"] = evaluate(gb.product).get_str();
    }
  }
  print(j);
  return 0;
}

int cmd_bounds_check(const std::string& file, std::optional<std::size_t> q) {
  auto r = check_volume_bound(read_polytope(file), q);
  print(to_json(r));
  return r.all_pass() ? 0 : 2;
}

int cmd_generate(const std::string& spec_file, const std::string& out_dir) {
  std::ifstream in(spec_file);
  if (!in) throw ParseError("cannot open " + spec_file);
  Json spec;
  try {
    spec = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  auto ps = generate(specs_from_json(spec));
  if (out_dir.empty()) {
    for (const auto& p : ps) std::cout << to_json(p).dump() << "\n";
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& p : ps) {
    auto path = std::filesystem::path(out_dir) / (p.name() + ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json(p).dump(2) << "\n";
  }
  std::cerr << "wrote " << ps.size() << " polytopes to " << out_dir << "\n";
  return 0;
}

int cmd_verify_all(const std::string& dir, const std::string& out_file, const VerifyOptions& opt) {
  auto rep = run_verify_all(dir, opt);
  if (out_file.empty()) {
    std::cout << rep.jsonl();
  } else {
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_file);
    out << rep.jsonl();
    std::cerr << rep.summary.dump() << "\n";
  }
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice polytope toolkit: Ehrhart data, Cayley decompositions, Gorenstein duality, bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string);
  int rc = 0;
  std::string file, mode = "hard", out, dir;
  bool oracle = false, exact = false, digits = false;
  std::size_t max_vertices = 10, d = 1;
  unsigned long k = 1;
  std::optional<std::size_t> q;
  VerifyOptions vopt;

  auto* hstar = app.add_subcommand("hstar", "h*-vector, degree, leading coefficient, volume, Gorenstein flag");
  hstar->add_option("file", file, "polytope document")->required();
  hstar->callback([&] { rc = cmd_hstar(file); });

  auto* deg = app.add_subcommand("degree", "degree of the h*-polynomial");
  deg->add_option("file", file)->required();
  deg->callback([&] { rc = cmd_degree(file); });

  auto* vol = app.add_subcommand("volume", "normalized volume");
  vol->add_option("file", file)->required();
  vol->callback([&] { rc = cmd_volume(file); });

  auto* cay = app.add_subcommand("cayley", "Cayley decompositions");
  cay->require_subcommand(1);
  auto* dec = cay->add_subcommand("decompose", "run the constructive pipeline");
  dec->add_option("file", file)->required();
  dec->add_flag("--oracle", oracle, "also report the exhaustive minimum");
  dec->add_option("--assert-bounds", mode, "hard: raise on a failed inequality; warn: record only")
      ->check(CLI::IsMember({"hard", "warn"}));
  dec->callback([&] { rc = cmd_decompose(file, oracle, mode); });
  auto* orc = cay->add_subcommand("oracle", "exhaustive minimal Cayley codimension");
  orc->add_option("file", file)->required();
  orc->add_option("--max-vertices", max_vertices, "vertex budget")->capture_default_str();
  orc->callback([&] { rc = cmd_oracle(file, max_vertices); });

  auto* gor = app.add_subcommand("gorenstein", "Gorenstein duality");
  gor->require_subcommand(1);
  auto* dual = gor->add_subcommand("dual", "dual polytope and involution map");
  dual->add_option("file", file)->required();
  dual->callback([&] { rc = cmd_gorenstein_dual(file); });
  auto* gb = gor->add_subcommand("check-bound", "check q <= 2d - 1");
  gb->add_option("file", file)->required();
  gb->add_option("--max-vertices", max_vertices, "oracle vertex budget")->capture_default_str();
  gb->callback([&] { rc = cmd_gorenstein_bound(file, max_vertices); });

  auto* bnd = app.add_subcommand("bounds", "explicit bound formulas");
  bnd->require_subcommand(1);
  auto* ev = bnd->add_subcommand("eval", "evaluate the bounds for d and k");
  ev->add_option("--d", d, "degree")->required()->check(CLI::NonNegativeNumber);
  ev->add_option("--k", k, "leading h* coefficient")->check(CLI::PositiveNumber)->capture_default_str();
  auto* ex = ev->add_flag("--exact", exact, "print exact values (subject to the digit budget)");
  ev->add_flag("--digits", digits, "digit counts only (default)")->excludes(ex);
  ev->callback([&] { rc = cmd_bounds_eval(d, k, exact); });
  auto* chk = bnd->add_subcommand("check", "check a polytope against the bounds");
  chk->add_option("file", file)->required();
  chk->add_option("--q", q, "achieved Cayley codimension to check");
  chk->callback([&] { rc = cmd_bounds_check(file, q); });

  auto* gen = app.add_subcommand("generate", "generate polytope documents from a corpus spec");
  gen->add_option("spec", file, "corpus spec JSON")->required();
  gen->add_option("--out", out, "output directory (JSON lines on stdout when omitted)");
  gen->callback([&] { rc = cmd_generate(file, out); });

  auto* va = app.add_subcommand("verify-all", "run every check on a corpus directory");
  va->add_option("dir", dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  va->add_option("--out", out, "report file (stdout when omitted)");
  va->add_option("--jobs", vopt.jobs, "worker threads, 0 for all cores")->capture_default_str();
  va->add_option("--oracle-max-vertices", vopt.oracle_max_vertices, "oracle vertex budget")->capture_default_str();
  va->add_flag("--timings", vopt.timings, "add per-stage wall-clock times (not deterministic)");
  va->callback([&] { rc = cmd_verify_all(dir, out, vopt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
