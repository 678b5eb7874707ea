#include "ragomp/bench_runner.hpp"
#include "ragomp/case_manifest.hpp"
#include "ragomp/config.hpp"
#include "ragomp/corpus_store.hpp"
#include "ragomp/embedder.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/generation_client.hpp"
#include "ragomp/harvester.hpp"
#include "ragomp/pipeline.hpp"
#include "ragomp/report.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/vector_index.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

namespace fs = std::filesystem;
using namespace ragomp;

namespace {

// Flags that map onto config settings. Only flags actually given end up in
// the map, so file and environment values survive for the rest.
struct FlagSettings {
  Settings values;

  void bind(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

std::optional<fs::path> g_config_path;

AppConfig resolve_config(const FlagSettings& flags) {
  Settings file;
  if (g_config_path) file = load_settings_file(*g_config_path);
  return config_from_settings(merge_settings(file, settings_from_env(), flags.values));
}

std::unique_ptr<EmbeddingProvider> make_embedder(const AppConfig& c, const CorpusManifest& manifest) {
  if (c.embedder == "remote") {
    RemoteEmbeddingConfig rc;
    rc.endpoint = c.embed_endpoint;
    rc.model = c.embed_model;
    return std::make_unique<RemoteEmbeddingProvider>(rc);
  }
  return std::make_unique<LocalLexicalEmbedder>(LocalLexicalEmbedder::fit(manifest));
}

struct GenerationStack {
  std::unique_ptr<GenerationProvider> base;
  std::unique_ptr<GenerationProvider> recorder;
  const GenerationProvider& get() const { return recorder ? *recorder : *base; }
};

GenerationStack make_generator(const AppConfig& c) {
  GenerationStack s;
  if (c.provider == "live") {
    ChatProviderConfig cc;
    cc.endpoint = c.chat_endpoint;
    s.base = std::make_unique<ChatCompletionProvider>(cc);
  } else if (c.provider == "canned") {
    if (c.canned_dir.empty()) throw UsageError("provider 'canned' needs --canned-dir");
    s.base = std::make_unique<CannedProvider>(c.canned_dir);
  } else {
    if (c.replay_dir.empty()) throw UsageError("provider 'replay' needs --replay-dir");
    s.base = std::make_unique<ReplayProvider>(c.replay_dir);
  }
  if (!c.record_dir.empty()) s.recorder = std::make_unique<RecordingProvider>(*s.base, c.record_dir);
  return s;
}

struct Retrieval {
  CorpusManifest manifest;
  std::unique_ptr<EmbeddingProvider> embedder;
  std::optional<FlatIndex> index;
  std::optional<RetrievalContext> context;
};

// Loads corpus manifest and index for the augmented profile; nothing for baseline.
std::unique_ptr<Retrieval> load_retrieval(const AppConfig& c) {
  auto r = std::make_unique<Retrieval>();
  if (c.profile == Profile::Baseline) return r;
  r->manifest = load_manifest(c.corpus_manifest);
  r->embedder = make_embedder(c, r->manifest);
  r->index.emplace(FlatIndex::load(c.index_path));
  r->index->check_against(r->manifest);
  if (r->index->provider_tag() != r->embedder->tag()) {
    throw IntegrityError("index " + c.index_path.string() + " was built with '" + r->index->provider_tag() +
                         "' but the configured embedder is '" + r->embedder->tag() + "'; rerun `ragomp index`");
  }
  r->context.emplace(RetrievalContext{r->manifest, *r->index, *r->embedder});
  return r;
}

void print_summary(const std::string& label, const std::vector<ValidationReport>& reports) {
  std::cout << render_report({{label, reports}}, ReportFormat::Text);
}

int cmd_ingest(const AppConfig& c) {
  if (c.corpus_dir.empty()) throw UsageError("ingest needs --corpus-dir");
  IngestResult r = ingest_corpus(c.corpus_dir, c.chunk_tokens);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  save_manifest(r.manifest, c.corpus_manifest);
  std::cout << "ingested " << r.manifest.chunks.size() << " chunks, corpus_version " << r.manifest.corpus_version
            << " -> " << c.corpus_manifest.string() << "\n";
  return 0;
}

int cmd_index(const AppConfig& c) {
  const CorpusManifest manifest = load_manifest(c.corpus_manifest);
  auto embedder = make_embedder(c, manifest);
  const FlatIndex index = FlatIndex::build(manifest, *embedder);
  index.save(c.index_path);
  std::cout << "indexed " << index.size() << " chunks with " << index.provider_tag() << " -> " << c.index_path.string()
            << "\n";
  return 0;
}

int cmd_transform(const AppConfig& c) {
  const CaseManifest cases = load_case_manifest(c.case_manifest);
  auto retrieval = load_retrieval(c);
  auto gen = make_generator(c);
  const PipelineOptions opts = options_from_config(c);
  const auto records = run_transform(cases, opts, retrieval->context ? &*retrieval->context : nullptr, gen.get(),
                                     profile_dir(c.out_dir, c.profile));
  std::size_t extracted = 0, errors = 0;
  for (const auto& r : records) {
    if (r.extracted_code) ++extracted;
    if (!r.error.empty()) {
      ++errors;
      std::cerr << r.case_id << ": " << r.error << "\n";
    }
  }
  std::cout << records.size() << " cases transformed, " << extracted << " with code, " << errors
            << " generation errors\n";
  return 0;
}

int cmd_validate(const AppConfig& c) {
  const CaseManifest cases = load_case_manifest(c.case_manifest);
  const fs::path pdir = profile_dir(c.out_dir, c.profile);
  const auto transforms = load_transform_records(cases, pdir);
  const auto reports = run_validate(cases, transforms, options_from_config(c), pdir);
  print_summary(std::string(to_string(c.profile)), reports);
  return 0;
}

int cmd_run(const AppConfig& c) {
  if (c.profile == Profile::Augmented) {
    if (!c.corpus_dir.empty()) cmd_ingest(c);
    if (!fs::exists(c.index_path)) cmd_index(c);
  }
  const CaseManifest cases = load_case_manifest(c.case_manifest);
  auto retrieval = load_retrieval(c);
  auto gen = make_generator(c);
  const PipelineResult result = run_pipeline(cases, options_from_config(c),
                                             retrieval->context ? &*retrieval->context : nullptr, gen.get(), c.out_dir);
  print_summary(std::string(to_string(c.profile)), result.reports);
  return 0;
}

struct BenchArgs {
  std::optional<fs::path> binary;
  std::optional<fs::path> import_csv;
  std::string case_id = "case";
  std::vector<std::string> run_args;
};

int cmd_bench(const AppConfig& c, const BenchArgs& a) {
  std::vector<BenchRecord> records;
  if (a.import_csv) {
    records = import_records(text::read_file(*a.import_csv));
  } else {
    if (!a.binary) throw UsageError("bench needs --binary or --import");
    SweepOptions so;
    so.args = a.run_args;
    so.timeout = std::chrono::seconds(c.bench_timeout_s);
    records = run_sweep(a.case_id, *a.binary, c.threads_sweep, c.repetitions, so);
  }
  const auto speedups = compute_speedups(records);
  const fs::path dir = c.out_dir / "bench";
  text::write_file(dir / "records.csv", records_csv(records));
  text::write_file(dir / "speedups.csv", speedups_csv(speedups));
  text::write_file(dir / "speedups.dat", speedup_series(speedups));
  std::cout << runtime_table(records) << "\n" << speedups_csv(speedups);
  for (const auto& r : records) {
    if (r.oversubscribed) {
      std::cerr << "note: " << r.case_id << " at " << r.threads << " threads ran oversubscribed\n";
    }
  }
  return 0;
}

struct ReportArgs {
  std::string format = "text";
  std::vector<std::string> inputs;  // label=path or path
};

int cmd_report(const AppConfig& c, const ReportArgs& a) {
  const ReportFormat format = parse_report_format(a.format);
  std::vector<LabelledReports> runs;
  if (a.inputs.empty()) {
    for (Profile p : {Profile::Baseline, Profile::Augmented}) {
      const fs::path path = profile_dir(c.out_dir, p) / "reports.jsonl";
      if (fs::exists(path)) runs.emplace_back(std::string(to_string(p)), load_reports(path));
    }
    if (runs.empty()) throw InvalidInput("no reports.jsonl under " + c.out_dir.string());
  }
  for (const auto& in : a.inputs) {
    const auto eq = in.find('=');
    const std::string label = eq == std::string::npos ? fs::path(in).parent_path().filename().string() : in.substr(0, eq);
    const std::string path = eq == std::string::npos ? in : in.substr(eq + 1);
    runs.emplace_back(label, load_reports(path));
  }
  std::cout << render_report(runs, format);
  return 0;
}

struct HarvestArgs {
  std::optional<fs::path> fixtures;
  std::optional<fs::path> record_api_dir;
  fs::path cases_dir = "cases";
  int max_pages = 15;
  std::size_t min_lines = 10;
  std::vector<std::string> categories;
};

int cmd_harvest(const AppConfig& c, const HarvestArgs& a) {
  std::unique_ptr<QaApi> base;
  if (a.fixtures) base = std::make_unique<FixtureQaApi>(*a.fixtures);
  else base = std::make_unique<StackExchangeApi>(StackExchangeConfig{});
  std::unique_ptr<QaApi> recorder;
  if (a.record_api_dir) recorder = std::make_unique<RecordingQaApi>(*base, *a.record_api_dir);
  const QaApi& api = recorder ? *recorder : *base;

  auto keywords = default_category_keywords();
  if (!a.categories.empty()) {
    std::map<std::string, std::string> chosen;
    for (const auto& cat : a.categories) {
      auto it = keywords.find(cat);
      if (it == keywords.end()) throw UsageError("unknown category '" + cat + "'");
      chosen.insert(*it);
    }
    keywords = std::move(chosen);
  }

  std::vector<CaseEntry> cases;
  if (fs::exists(c.case_manifest)) cases = load_case_manifest(c.case_manifest).cases;
  HarvestOptions ho;
  ho.max_pages = a.max_pages;
  ho.filter.min_lines = a.min_lines;
  ho.workers = c.workers;
  const fs::path manifest_dir = fs::absolute(c.case_manifest).parent_path();
  HarvestResult r = harvest(keywords, api, cases, a.cases_dir, manifest_dir, c.out_dir / "harvest" / "work", ho);

  std::string log;
  for (const auto& cand : r.candidates) log += candidate_to_json(cand).dump() + "\n";
  text::write_file(c.out_dir / "harvest" / "candidates.jsonl", log);
  save_case_manifest(cases, c.case_manifest);
  std::map<std::string, std::size_t> rejected;
  for (const auto& cand : r.candidates) {
    if (cand.rejection_reason) ++rejected[std::string(to_string(*cand.rejection_reason))];
  }
  std::cout << r.candidates.size() << " candidates, " << r.added.size() << " added to "
            << c.case_manifest.string() << "\n";
  for (const auto& [reason, n] : rejected) std::cout << "  rejected " << reason << ": " << n << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented serial-to-OpenMP translation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  FlagSettings flags;

  app.add_option_function<std::string>(
      "--config", [](const std::string& p) { g_config_path = p; }, "INI config file");
  flags.bind(app, "--profile", "profile", "augmented (alias p4omp) or baseline");
  flags.bind(app, "--k", "top_k", "retrieved chunks per prompt");
  flags.bind(app, "--model", "model", "generation model name");
  flags.bind(app, "--temperature", "temperature", "sampling temperature");
  flags.bind(app, "--threads-sweep", "threads_sweep", "comma-separated thread counts for bench");
  flags.bind(app, "--diff-threads", "diff_threads", "comma-separated thread counts for differential testing");
  flags.bind(app, "--repetitions", "repetitions", "bench repetitions per thread count");
  flags.bind(app, "--workers", "workers", "concurrent cases");
  flags.bind(app, "--provider", "provider", "live, replay or canned");
  flags.bind(app, "--replay-dir", "replay_dir", "recorded replies");
  flags.bind(app, "--canned-dir", "canned_dir", "hand-written replies, <case_id>.md");
  flags.bind(app, "--record-dir", "record_dir", "write a replay record for every reply");
  flags.bind(app, "--embedder", "embedder", "local or remote");
  flags.bind(app, "--corpus-dir", "corpus_dir", "tutorial corpus root");
  flags.bind(app, "--corpus-manifest", "corpus_manifest", "chunk manifest path");
  flags.bind(app, "--index", "index_path", "vector index path");
  flags.bind(app, "--manifest", "case_manifest", "case manifest (JSONL)");
  flags.bind(app, "--out-dir", "out_dir", "output directory");
  flags.bind(app, "--template", "template_path", "prompt template file");
  flags.bind(app, "--compile-command", "compile_command", "compiler command with {src} and {bin}");
  flags.bind(app, "--chunk-tokens", "chunk_tokens", "chunk budget in whitespace tokens");

  auto* ingest = app.add_subcommand("ingest", "chunk a tutorial corpus into a manifest");
  auto* index = app.add_subcommand("index", "embed the corpus manifest into a vector index");
  auto* transform = app.add_subcommand("transform", "retrieve, prompt, generate and extract code per case");
  auto* validate = app.add_subcommand("validate", "compile, classify and differentially test transform output");
  auto* run = app.add_subcommand("run", "ingest/index if needed, then transform, validate and summarize");

  HarvestArgs harvest_args;
  auto* harvest_cmd = app.add_subcommand("harvest", "collect candidate serial programs from a Q&A site");
  harvest_cmd->add_option("--fixtures", harvest_args.fixtures, "serve API responses from recorded files");
  harvest_cmd->add_option("--record-api", harvest_args.record_api_dir, "record live API responses here");
  harvest_cmd->add_option("--cases-dir", harvest_args.cases_dir, "where accepted programs are written");
  harvest_cmd->add_option("--max-pages", harvest_args.max_pages, "result pages per category");
  harvest_cmd->add_option("--min-lines", harvest_args.min_lines, "minimum non-blank lines");
  harvest_cmd->add_option("--category", harvest_args.categories, "restrict to these categories");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "thread sweep timing and speedups");
  bench->add_option("--binary", bench_args.binary, "program printing ELAPSED_SECONDS=<s> last");
  bench->add_option("--import", bench_args.import_csv, "CSV of case_id,threads,wall_seconds");
  bench->add_option("--case-id", bench_args.case_id, "label for measured records");
  bench->add_option("--arg", bench_args.run_args, "argument passed to the binary");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "render compilation outcome tables");
  report->add_option("--format", report_args.format, "text, csv or json");
  report->add_option("--reports", report_args.inputs, "label=path/to/reports.jsonl (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const AppConfig config = resolve_config(flags);
    if (ingest->parsed()) return cmd_ingest(config);
    if (index->parsed()) return cmd_index(config);
    if (transform->parsed()) return cmd_transform(config);
    if (validate->parsed()) return cmd_validate(config);
    if (run->parsed()) return cmd_run(config);
    if (harvest_cmd->parsed()) return cmd_harvest(config, harvest_args);
    if (bench->parsed()) return cmd_bench(config, bench_args);
    if (report->parsed()) return cmd_report(config, report_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const FetchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.advice().empty()) std::cerr << "hint: " << e.advice() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
