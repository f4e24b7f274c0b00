#pragma once

// verify-all: every property check on every corpus file, as JSON lines in
// file-name order followed by a summary line.

#include "cayleykit/bounds.hpp"
#include "cayleykit/cayley.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/gorenstein.hpp"
#include "cayleykit/json_io.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cayleykit {

inline constexpr const char* version_string = "cayleykit 0.1.0";

struct VerifyOptions {
  std::size_t oracle_max_vertices = 8;
  std::size_t jobs = 0;  // 0: hardware concurrency
  bool timings = false;  // wall-clock fields make reports nondeterministic
};

enum class Status { pass = 0, inconclusive = 1, fail = 2 };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "inconclusive";
  }
}

struct VerifyRecord {
  Json json;
  Status status = Status::pass;
  std::vector<std::pair<std::string, Status>> verdicts;
};

namespace detail {

class RecordBuilder {
 public:
  explicit RecordBuilder(bool timings) : timings_(timings), start_(Clock::now()) {}

  void verdict(const std::string& name, Status s) {
    verdicts_.emplace_back(name, s);
    if (static_cast<int>(s) > static_cast<int>(worst_)) worst_ = s;
  }
  void verdict(const std::string& name, bool ok) { verdict(name, ok ? Status::pass : Status::fail); }
  void error(const std::string& stage, const std::exception& e) { errors_.push_back(stage + ": " + e.what()); }
  void warning(const std::string& w) { warnings_.push_back(w); }
  void lap(const std::string& stage) {
    if (!timings_) return;
    auto now = Clock::now();
    times_[stage] = std::chrono::duration<double>(now - start_).count();
    start_ = now;
  }

  VerifyRecord finish(Json j) {
    Json v = Json::object();
    for (const auto& [name, s] : verdicts_) v[name] = to_string(s);
    j["verdicts"] = std::move(v);
    j["status"] = to_string(worst_);
    if (!warnings_.empty()) j["warnings"] = warnings_;
    if (!errors_.empty()) j["errors"] = errors_;
    if (timings_) j["timings"] = times_;
    return {std::move(j), worst_, std::move(verdicts_)};
  }

 private:
  using Clock = std::chrono::steady_clock;
  bool timings_;
  Clock::time_point start_;
  Status worst_ = Status::pass;
  std::vector<std::pair<std::string, Status>> verdicts_;
  std::vector<std::string> warnings_, errors_;
  std::map<std::string, double> times_;
};

inline Status from_verdict(Verdict v) {
  switch (v) {
    case Verdict::pass: return Status::pass;
    case Verdict::fail: return Status::fail;
    default: return Status::inconclusive;
  }
}

}  // namespace detail

/// All checks for one document. Stages that throw are recorded as failures.
inline VerifyRecord verify_document(const PolytopeDocument& doc, const std::string& file, const VerifyOptions& opt = {}) {
  const auto& p = doc.polytope;
  detail::RecordBuilder rb(opt.timings);
  Json j;
  j["file"] = file;
  j["name"] = p.name();
  j["n"] = p.dim();

  std::optional<HStarData> h;
  try {
    EhrhartCalculator calc(p);
    h = calc.h_star();
    rb.verdict("ehrhart_reciprocity", calc.reciprocity_check(3));
    rb.verdict("degree_by_interior", calc.degree_by_interior() == h->degree);
  } catch (const std::exception& e) {
    rb.error("hstar", e);
    rb.verdict("hstar", Status::fail);
  }
  rb.lap("hstar");
  if (!h) return rb.finish(std::move(j));
  Json hs = Json::array();
  for (const auto& c : h->coefficients) hs.push_back(to_json(c));
  j["hstar"] = hs;
  j["d"] = h->degree;
  j["k"] = to_json(h->leading);
  j["Vol"] = to_json(h->normalized_volume);
  j["gorenstein"] = h->gorenstein;
  if (doc.expected_hstar) rb.verdict("expected_hstar", *doc.expected_hstar == h->coefficients);

  std::optional<std::size_t> q;
  try {
    PipelineOptions po;
    po.mode = BoundMode::warn;
    po.hstar = *h;
    auto run = run_pipeline(p, po);
    q = run.decomposition.q;
    rb.verdict("decomposition_verified", Status::pass);
    for (const auto& c : run.checks) {
      if (c.warning_only) {
        if (!c.holds) rb.warning(c.name + ": " + c.lhs.get_str() + " > " + c.rhs.get_str());
        continue;
      }
      rb.verdict(c.name, c.holds);
    }
    rb.verdict("degree <= q", h->degree <= *q);
    j["q_pipeline"] = *q;
    j["s_pipeline"] = run.decomposition.s;
    j["f3_bound_held"] = run.f3_bound_held();
  } catch (const std::exception& e) {
    rb.error("pipeline", e);
    rb.verdict("decomposition_verified", Status::fail);
    j["q_pipeline"] = nullptr;
  }
  rb.lap("pipeline");

  if (p.num_vertices() <= opt.oracle_max_vertices) {
    try {
      auto o = minimal_cayley_codim(p, opt.oracle_max_vertices);
      j["q_oracle"] = o.q_star;
      rb.verdict("q* >= degree", o.q_star >= h->degree);
      if (q) rb.verdict("q_pipeline >= q*", *q >= o.q_star);
    } catch (const std::exception& e) {
      rb.error("oracle", e);
      rb.verdict("oracle", Status::fail);
    }
  }
  rb.lap("oracle");

  if (h->gorenstein) {
    try {
      auto c = gorenstein_dual(p);
      auto inv = dual_involution(p, c);
      rb.verdict("gorenstein_dual", Status::pass);
      rb.verdict("dual_involution", inv.local.unimodular());
      rb.verdict("dual_degree_preserved", c.dual_hstar.degree == h->degree && c.dual.dim() == p.dim());
      rb.verdict("dual_fractional_sum <= d", dual_fractional_sum(c) <= static_cast<unsigned long>(h->degree));
    } catch (const std::exception& e) {
      rb.error("gorenstein", e);
      rb.verdict("gorenstein_dual", Status::fail);
    }
    try {
      auto g = verify_gorenstein_cayley_bound(p, opt.oracle_max_vertices);
      rb.verdict("q <= 2d-1", detail::from_verdict(g.status));
      for (const auto& note : g.notes) rb.warning(note);
    } catch (const std::exception& e) {
      rb.error("gorenstein_bound", e);
      rb.verdict("q <= 2d-1", Status::fail);
    }
  }
  rb.lap("gorenstein");

  try {
    auto br = check_volume_bound(p, q, *h);
    if (br.volume_bound_digits > 0) j["volume_bound_digits"] = to_json(br.volume_bound_digits);
    for (const auto& v : br.verdicts) {
      if (v.status == CheckStatus::skipped) {
        rb.warning(v.name + ": " + v.note);
        continue;
      }
      rb.verdict(v.name, v.status == CheckStatus::pass);
    }
  } catch (const std::exception& e) {
    rb.error("bounds", e);
    rb.verdict("volume_bound", Status::fail);
  }
  rb.lap("bounds");
  return rb.finish(std::move(j));
}

inline VerifyRecord verify_file(const std::filesystem::path& path, const VerifyOptions& opt = {}) {
  const std::string file = path.filename().string();
  try {
    return verify_document(read_document(path.string()), file, opt);
  } catch (const ParseError& e) {
    detail::RecordBuilder rb(false);
    rb.error("parse", e);
    rb.verdict("parse", Status::inconclusive);
    Json j;
    j["file"] = file;
    return rb.finish(std::move(j));
  } catch (const std::invalid_argument& e) {
    // well-formed JSON that is not a valid polytope
    detail::RecordBuilder rb(false);
    rb.error("parse", e);
    rb.verdict("parse", Status::inconclusive);
    Json j;
    j["file"] = file;
    return rb.finish(std::move(j));
  }
}

/// Corpus files (*.json) in file-name order.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return out;
}

/// Runs `f` over [0, n) on a small pool; results land in their own slots.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex m;
  for (std::size_t t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct RunReport {
  std::vector<VerifyRecord> records;
  Json summary;
  int exit_code = 0;  // 0 all pass, 2 any failure, 3 inconclusive only

  /// JSON lines: one record per file, then {"summary": ...}.
  std::string jsonl() const {
    std::string out;
    for (const auto& r : records) out += r.json.dump() + "\n";
    out += Json{{"summary", summary}}.dump() + "\n";
    return out;
  }
};

inline RunReport run_verify_all(const std::filesystem::path& dir, const VerifyOptions& opt = {}) {
  auto files = corpus_files(dir);
  RunReport rep;
  rep.records.resize(files.size());
  parallel_for(files.size(), opt.jobs, [&](std::size_t i) { rep.records[i] = verify_file(files[i], opt); });

  std::map<std::string, std::array<std::size_t, 3>> per_check;
  std::array<std::size_t, 3> totals{};
  for (const auto& r : rep.records) {
    ++totals[static_cast<int>(r.status)];
    for (const auto& [name, s] : r.verdicts) ++per_check[name][static_cast<int>(s)];
  }
  Json checks = Json::object();
  for (const auto& [name, c] : per_check) checks[name] = Json{{"pass", c[0]}, {"fail", c[2]}, {"inconclusive", c[1]}};
  rep.exit_code = totals[2] ? 2 : totals[1] ? 3 : 0;
  rep.summary = Json{{"version", version_string},
                     {"polytopes", rep.records.size()},
                     {"pass", totals[0]},
                     {"fail", totals[2]},
                     {"inconclusive", totals[1]},
                     {"checks", std::move(checks)},
                     {"exit_code", rep.exit_code}};
  return rep;
}

}  // namespace cayleykit
