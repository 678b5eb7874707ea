// Acceptance suite: one PASS/FAIL/SKIP/INFO line per criterion. The exit status
// is nonzero if any gating criterion fails; environment-sensitive criteria that
// cannot run on this host print SKIP with the reason.

#include "ragomp/bench_runner.hpp"
#include "ragomp/corpus_store.hpp"
#include "ragomp/embedder.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/http_transport.hpp"
#include "ragomp/pipeline.hpp"
#include "ragomp/report.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/validation_lab.hpp"
#include "ragomp/vector_index.hpp"

#include "filter_cases.hpp"
#include "mini_pipeline.hpp"
#include "taxonomy_cases.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace ragomp;
using testsupport::TempDir;

namespace {

enum class Status { Pass, Fail, Skip, Info };

struct Outcome {
  Status status = Status::Fail;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::Fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// --- 1 ------------------------------------------------------------------------

// Reference ranking: score every entry with a plain dot product of the stored
// unit vectors, sort the whole list by (score desc, id asc), cut at k.
std::vector<std::pair<std::string, double>> brute_force(const FlatIndex& index, const EmbeddingVector& q,
                                                        std::size_t k) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& e : index.entries()) {
    long double dot = 0;
    for (std::size_t d = 0; d < q.values.size(); ++d) dot += static_cast<long double>(e.vector.values[d]) * q.values[d];
    all.emplace_back(e.chunk_id, static_cast<double>(dot));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

Outcome retrieval_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  const std::vector<std::string> vocab{
      "parallel", "for",    "reduction", "atomic", "critical", "shared",   "private", "collapse", "schedule",
      "static",   "dynamic", "barrier",  "nowait", "task",     "simd",     "loop",    "matrix",   "vector",
      "sum",      "histogram", "jacobi", "stencil", "prefix",  "scan",     "thread",  "team",     "iterator",
      "default",  "none",   "firstprivate", "lastprivate", "ordered", "single", "master", "section", "flush"};
  std::size_t queries = 0, ties_seen = 0;
  for (int corpus = 0; corpus < 100; ++corpus) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    CorpusManifest m;
    for (std::size_t i = 0; i < n; ++i) {
      std::string body;
      // Every fifth chunk repeats an earlier body so exact score ties occur.
      if (i > 0 && i % 5 == 0) {
        body = m.chunks[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)].body;
      } else {
        const int words = std::uniform_int_distribution<int>(1, 12)(rng);
        for (int w = 0; w < words; ++w) {
          body += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)] + " ";
        }
      }
      char id[32];
      std::snprintf(id, sizeof id, "doc%d.md#%03zu", corpus, i + 1);
      m.chunks.push_back({id, "doc", {}, body, text::whitespace_token_count(body)});
    }
    std::shuffle(m.chunks.begin(), m.chunks.end(), rng);  // manifest order must not matter
    m.corpus_version = compute_corpus_version(m.chunks);
    const auto embedder = LocalLexicalEmbedder::fit(m);
    const auto index = FlatIndex::build(m, embedder);
    for (int qi = 0; qi < 3; ++qi) {
      std::string qtext;
      for (int w = 0; w < 4; ++w) qtext += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)] + " ";
      const auto q = embed(qtext, embedder);
      for (std::size_t k : {std::size_t{1}, std::size_t{4}, n}) {
        ++queries;
        const auto got = index.query_topk(q, k);
        const auto want = brute_force(index, q, k);
        if (got.size() != want.size()) return fail("corpus " + std::to_string(corpus) + ": hit count differs");
        for (std::size_t i = 0; i < got.size(); ++i) {
          if (got[i].chunk_id != want[i].first || std::abs(got[i].score - want[i].second) > 1e-9 ||
              got[i].rank != i + 1) {
            return fail("corpus " + std::to_string(corpus) + " k=" + std::to_string(k) + " rank " +
                        std::to_string(i + 1) + ": got " + got[i].chunk_id + " want " + want[i].first);
          }
          if (i > 0 && got[i].score == got[i - 1].score) ++ties_seen;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  const std::string detail = std::to_string(queries) + " queries over 100 corpora, " + std::to_string(ties_seen) +
                             " tied neighbours, " + fmt("%.2f s", secs);
  if (ties_seen == 0) return fail("no ties exercised; " + detail);
  if (secs >= 10.0) return fail("too slow: " + detail);
  return pass(detail);
}

// --- 2 ------------------------------------------------------------------------

Outcome table2_arithmetic() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = testsupport::source_dir() / "data" / "table2";
  const auto baseline = load_reports(dir / "baseline.reports.jsonl");
  const auto augmented = load_reports(dir / "augmented.reports.jsonl");
  const auto b = summarize(baseline), a = summarize(augmented);
  const std::string table = render_report({{"baseline", baseline}, {"p4omp", augmented}}, ReportFormat::Text);
  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  expect(b.total_cases == 108 && a.total_cases == 108, "108 cases per profile");
  expect(b.compile_success == 82 && b.fixable_failures == 20 && b.excluded_unparallelizable == 6, "baseline 82/20/6");
  expect(a.compile_success == 102 && a.fixable_failures == 0 && a.excluded_unparallelizable == 6, "augmented 102/0/6");
  for (const char* cell : {"82/108 (75.9%)", "102/108 (94.4%)", "82/102 (80.4%)", "102/102 (100.0%)",
                           "6/108 (excluded)", "20/108 (18.5%)"}) {
    expect(table.find(cell) != std::string::npos, std::string("cell ") + cell);
  }
  expect(b.effective_success_rate && fmt("%.3f", *b.effective_success_rate) == "0.804", "baseline rate 0.804");
  const double secs = seconds_since(t0);
  expect(secs < 1.0, "runtime under 1 s");
  if (!problems.empty()) return fail("missing: " + text::join(problems, "; "));
  return pass("baseline 82/108 (75.9%), p4omp 102/108 (94.4%), effective 80.4% / 100.0%, 6 excluded, " +
              fmt("%.3f s", secs));
}

// --- 3 ------------------------------------------------------------------------

Outcome table3_speedups() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = import_records(text::read_file(testsupport::source_dir() / "data" / "table3_runtimes.csv"));
  const auto rows = compute_speedups(records);
  auto speedup = [&](const std::string& id, int threads) {
    for (const auto& r : rows) {
      if (r.case_id == id && r.threads == threads) return r.speedup;
    }
    return std::nan("");
  };
  std::vector<std::string> problems;
  if (records.size() != 28) problems.push_back(std::to_string(records.size()) + " records, expected 28");
  const struct {
    const char* id;
    int threads;
    double expected;
  } checks[] = {{"case2_matrix_multiply", 8, 7.922}, {"case6_jacobi2d", 8, 5.737}, {"case4_histogram", 2, 0.805}};
  std::string got;
  for (const auto& c : checks) {
    const double s = speedup(c.id, c.threads);
    got += std::string(c.id) + "@" + std::to_string(c.threads) + "=" + fmt("%.4f", s) + " ";
    if (!(std::abs(s - c.expected) <= 0.001)) problems.push_back(std::string(c.id) + " off");
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) problems.push_back("runtime over 1 s");
  if (!problems.empty()) return fail(text::join(problems, "; ") + " | " + got);
  return pass("28 records; " + got + fmt("(%.3f s)", secs));
}

// --- 4 ------------------------------------------------------------------------

Outcome taxonomy_coverage() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t exact = 0;
  std::vector<std::string> misses;
  for (const auto& tc : testsupport::taxonomy_cases()) {
    TempDir dir;
    const std::string src = text::read_file(testsupport::fixtures() / "taxonomy" / tc.file);
    const auto r = compile_gate(src, dir.path());
    if (r.compile_ok) {
      misses.push_back(tc.file + " compiled");
      continue;
    }
    const auto got = classify_failure(r.diagnostics, src);
    if (got == tc.expected) ++exact;
    else misses.push_back(tc.file + " -> " + std::string(to_string(got)));
  }
  const double secs = seconds_since(t0);
  const std::string detail = std::to_string(exact) + "/" + std::to_string(testsupport::taxonomy_cases().size()) +
                             " fixtures classified exactly, " + fmt("%.1f s", secs);
  if (!misses.empty()) return fail(detail + "; " + text::join(misses, "; "));
  if (secs >= 60.0) return fail("too slow: " + detail);
  return pass(detail);
}

// --- 5 ------------------------------------------------------------------------

Outcome hermetic_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  net::set_policy(net::Policy::Forbid);
  net::reset_request_count();
  testsupport::MiniPipeline mini;
  TempDir first, second;
  const auto opts = mini.options(Profile::Augmented);
  const auto r1 = run_pipeline(mini.cases, opts, &mini.retrieval, mini.replay, first.path());
  const auto r2 = run_pipeline(mini.cases, opts, &mini.retrieval, mini.replay, second.path());
  const std::size_t requests = net::request_count();
  net::set_policy(net::Policy::Allow);

  std::vector<std::string> problems;
  if (requests != 0) problems.push_back(std::to_string(requests) + " network requests");
  if (r1.reports.size() != 5) problems.push_back(std::to_string(r1.reports.size()) + " reports");
  for (const char* f : {"reports.jsonl", "summary.json"}) {
    if (text::read_file(first / "augmented" / f) != text::read_file(second / "augmented" / f)) {
      problems.push_back(std::string(f) + " differs between runs");
    }
  }
  std::size_t gen_errors = 0;
  for (const auto& t : r1.transforms) gen_errors += t.error.empty() ? 0 : 1;
  if (gen_errors) problems.push_back(std::to_string(gen_errors) + " replay misses");
  const double secs = seconds_since(t0);
  if (secs >= 120.0) problems.push_back("runtime over 120 s");
  if (!problems.empty()) return fail(text::join(problems, "; "));
  return pass("5 reports, 0 network requests, byte-identical across two runs, " + fmt("%.1f s", secs));
}

// --- 6 ------------------------------------------------------------------------

Outcome differential_soundness() {
  TempDir dir;
  auto build = [&](const std::string& rel, const std::string& stem) {
    return compile_gate(text::read_file(testsupport::fixtures() / "differential" / rel), dir.path(), {}, stem);
  };
  const auto serial = build("serial_sum.cc", "serial");
  const auto good = build("correct_reduction.cc", "good");
  const auto racy = build("racy_reduction.cc", "racy");
  if (!serial.compile_ok || !good.compile_ok || !racy.compile_ok) return fail("fixtures did not compile");

  const auto correct = differential_validate(serial.binary, good.binary, {1, 8}, {});
  if (correct.verdict != DifferentialVerdict::Pass) {
    return fail("correct reduction: " + std::string(to_string(correct.verdict)) + " " + correct.detail);
  }
  int detected = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = differential_validate(serial.binary, racy.binary, {8}, {});
    if (r.verdict == DifferentialVerdict::Mismatch || r.verdict == DifferentialVerdict::RuntimeError) ++detected;
  }
  const unsigned cores = std::thread::hardware_concurrency();
  const std::string detail = "correct fixture Pass at {1,8}; racy fixture flagged in " + std::to_string(detected) +
                             "/20 trials at 8 threads (host cores: " + std::to_string(cores) + ")";
  if (detected < 1) return fail(detail);
  return pass(detail);
}

// --- 7 ------------------------------------------------------------------------

Outcome scaling_sanity() {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) {
    return {Status::Skip, "environment-sensitive, non-gating: host has " + std::to_string(cores) +
                              " logical core(s), criterion needs >= 4"};
  }
  TempDir dir;
  const auto bin = compile_gate(text::read_file(testsupport::fixtures() / "bench" / "matmul.cc"), dir.path());
  if (!bin.compile_ok) return {Status::Skip, "non-gating: bench fixture failed to compile"};
  SweepOptions opts;
  opts.args = {"512"};
  try {
    const auto recs = run_sweep("matmul512", bin.binary, {1, 4}, 3, opts);
    const auto sp = compute_speedups(recs);
    const double s4 = sp.back().speedup;
    const std::string detail = "512^3 matmul speedup at 4 threads " + fmt("%.2f", s4) + " (non-gating)";
    return {s4 >= 1.5 ? Status::Pass : Status::Skip, s4 >= 1.5 ? detail : detail + ", below 1.5 on this host"};
  } catch (const LockHeld& e) {
    return {Status::Skip, std::string("non-gating: ") + e.what()};
  }
}

// --- 8 ------------------------------------------------------------------------

Outcome filter_conformance() {
  const auto t0 = std::chrono::steady_clock::now();
  TempDir dir;
  const auto cases = testsupport::filter_cases();
  std::size_t exact = 0;
  std::set<std::string> reasons_seen;
  std::vector<std::string> misses;
  for (const auto& fc : cases) {
    const std::string got = testsupport::filter_outcome(fc.code, dir / fc.file);
    reasons_seen.insert(fc.expected);
    if (got == fc.expected) ++exact;
    else misses.push_back(fc.file + ": got " + got + ", want " + fc.expected);
  }
  const double secs = seconds_since(t0);
  const std::string detail = std::to_string(exact) + "/" + std::to_string(cases.size()) + " snippets exact, " +
                             std::to_string(reasons_seen.size()) + " distinct outcomes, " + fmt("%.1f s", secs);
  const bool every_reason = reasons_seen.size() == 6;  // five rejection reasons plus accepted
  if (cases.size() != 12 || !misses.empty() || !every_reason) {
    return fail(detail + (misses.empty() ? "" : "; " + text::join(misses, "; ")));
  }
  if (secs >= 30.0) return fail("too slow: " + detail);
  return pass(detail);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "retrieval exactness vs brute-force oracle", retrieval_exactness},
      {2, "compilation outcome table arithmetic", table2_arithmetic},
      {3, "runtime table speedup arithmetic", table3_speedups},
      {4, "failure taxonomy coverage", taxonomy_coverage},
      {5, "hermetic replay end-to-end", hermetic_end_to_end},
      {6, "differential validation soundness", differential_soundness},
      {7, "scaling sanity (environment-sensitive)", scaling_sanity},
      {8, "harvester filter conformance", filter_conformance},
      {9, "live generation quality",
       [] {
         return Outcome{Status::Info,
                        "not assertable offline; manual live-run procedure in docs/live_runs.md"};
       }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL"
                                                        : o.status == Status::Skip ? "SKIP"
                                                                                   : "INFO";
    if (o.status == Status::Fail) ++failures;
    std::printf("[%s] criterion %d: %s -- %s\n", tag, c.number, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d gating failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
