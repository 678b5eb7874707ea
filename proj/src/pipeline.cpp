#include "ragomp/pipeline.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/workers.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>

namespace ragomp {

namespace fs = std::filesystem;
using nlohmann::json;

PipelineOptions options_from_config(const AppConfig& config) {
  PipelineOptions o;
  o.profile = config.profile;
  o.top_k = config.top_k;
  o.model = config.model;
  o.temperature = config.temperature;
  if (config.template_path) o.prompt_template = text::read_file(*config.template_path);
  o.diff_threads = config.diff_threads;
  o.workers = config.workers;
  o.relative_tolerance = config.relative_tolerance;
  o.compiler.command_template = config.compile_command;
  o.compiler.timeout = std::chrono::seconds(config.compile_timeout_s);
  o.run_timeout = std::chrono::seconds(config.run_timeout_s);
  return o;
}

std::string transform_record_json(const TransformRecord& r) {
  json hits = json::array();
  for (const auto& h : r.hits) hits.push_back(json{{"chunk_id", h.chunk_id}, {"score", h.score}, {"rank", h.rank}});
  json j{{"case_id", r.case_id},
         {"profile", r.profile},
         {"hits", hits},
         {"prompt_sha256", r.prompt_sha256},
         {"prompt", r.prompt},
         {"provider", r.provider},
         {"raw_reply", r.raw_reply},
         {"extracted_code", r.extracted_code ? json(*r.extracted_code) : json(nullptr)},
         {"error", r.error}};
  return j.dump(2) + "\n";
}

TransformRecord parse_transform_record(std::string_view text) {
  try {
    const json j = json::parse(text);
    TransformRecord r;
    r.case_id = j.at("case_id").get<std::string>();
    r.profile = j.at("profile").get<std::string>();
    for (const auto& h : j.at("hits")) {
      r.hits.push_back(RetrievalHit{h.at("chunk_id").get<std::string>(), h.at("score").get<double>(),
                                    h.at("rank").get<std::size_t>()});
    }
    r.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.provider = j.at("provider").get<std::string>();
    r.raw_reply = j.at("raw_reply").get<std::string>();
    if (!j.at("extracted_code").is_null()) r.extracted_code = j.at("extracted_code").get<std::string>();
    r.error = j.value("error", "");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("transform record: ") + e.what(), 0);
  }
}

fs::path profile_dir(const fs::path& out_dir, Profile profile) { return out_dir / std::string(to_string(profile)); }

TransformRecord transform_case(const CaseEntry& entry, std::string_view serial_source, const PipelineOptions& options,
                               const RetrievalContext* retrieval, const GenerationProvider& provider,
                               std::chrono::milliseconds* latency) {
  TransformRecord rec;
  rec.case_id = entry.case_id;
  rec.profile = std::string(to_string(options.profile));
  rec.provider = provider.name();

  static const CorpusManifest kNoCorpus{};
  const CorpusManifest* manifest = &kNoCorpus;
  if (options.profile == Profile::Augmented) {
    if (retrieval == nullptr) throw UsageError("augmented profile requires a corpus index");
    manifest = &retrieval->manifest;
    rec.hits = retrieval->index.query_topk(embed(serial_source, retrieval->embedder), options.top_k);
  }
  const PromptBundle bundle = build_prompt(serial_source, rec.hits, *manifest, options.prompt_template);
  rec.prompt = bundle.rendered;
  rec.prompt_sha256 = text::sha256_hex(bundle.rendered);

  GenerationRequest req;
  req.model_name = options.model;
  req.temperature = options.temperature;
  req.prompt = bundle.rendered;
  req.case_id = entry.case_id;
  try {
    GenerationOutcome out = generate(req, provider);
    rec.raw_reply = std::move(out.raw_reply);
    rec.extracted_code = std::move(out.extracted_code);
    if (latency) *latency = out.provider_latency;
  } catch (const ProviderError& e) {
    rec.error = e.what();
  } catch (const ReplayMiss& e) {
    rec.error = e.what();
  }
  return rec;
}

ValidationReport validate_case(const CaseEntry& entry, std::string_view serial_source, const TransformRecord& transform,
                               const PipelineOptions& options, const fs::path& work_dir) {
  ValidationReport r;
  r.case_id = entry.case_id;
  r.excluded_unparallelizable = entry.unparallelizable;

  if (!transform.error.empty()) {
    r.failure_category = FailureCategory::OtherCompileError;
    r.diagnostics = "generation failed: " + transform.error;
    return r;
  }
  if (!transform.extracted_code) {
    r.failure_category = FailureCategory::OtherCompileError;
    r.diagnostics = "no code block in reply";
    return r;
  }

  CompileResult candidate;
  try {
    candidate = compile_gate(*transform.extracted_code, work_dir, options.compiler, "candidate");
  } catch (const TimeoutError& e) {
    r.failure_category = FailureCategory::OtherCompileError;
    r.diagnostics = "compile timed out";
    return r;
  }
  r.diagnostics = candidate.diagnostics;
  if (!candidate.compile_ok) {
    r.failure_category = classify_failure(candidate.diagnostics, *transform.extracted_code);
    return r;
  }
  r.compile_ok = true;

  const CompileResult serial = compile_gate(serial_source, work_dir, options.compiler, "serial");
  if (!serial.compile_ok) {
    text::write_file(work_dir / "differential.txt", "serial reference failed to compile\n" + serial.diagnostics);
    return r;
  }
  RunInput input{entry.input_args, options.run_timeout};
  const DifferentialResult diff =
      differential_validate(serial.binary, candidate.binary, options.diff_threads, input, options.relative_tolerance);
  r.differential_verdict = diff.verdict;
  r.threads_tested = diff.threads_tested;
  text::write_file(work_dir / "differential.txt", std::string(to_string(diff.verdict)) + "\n" + diff.detail + "\n");
  return r;
}

std::vector<TransformRecord> run_transform(const CaseManifest& cases, const PipelineOptions& options,
                                           const RetrievalContext* retrieval, const GenerationProvider& provider,
                                           const fs::path& pdir) {
  const std::size_t n = cases.cases.size();
  std::vector<TransformRecord> records(n);
  std::vector<std::chrono::milliseconds> latencies(n, std::chrono::milliseconds{0});
  fs::create_directories(pdir / "transform");
  fs::create_directories(pdir / "generated");
  parallel_for(n, options.workers, [&](std::size_t i) {
    const CaseEntry& entry = cases.cases[i];
    const std::string source = cases.read_source(entry);
    records[i] = transform_case(entry, source, options, retrieval, provider, &latencies[i]);
    text::write_file(pdir / "transform" / (entry.case_id + ".json"), transform_record_json(records[i]));
    const fs::path gen = pdir / "generated" / (entry.case_id + ".cc");
    if (records[i].extracted_code) {
      text::write_file(gen, *records[i].extracted_code);
    } else {
      std::error_code ec;
      fs::remove(gen, ec);
    }
  });
  std::string csv = "case_id,latency_ms\n";
  for (std::size_t i = 0; i < n; ++i) csv += records[i].case_id + "," + std::to_string(latencies[i].count()) + "\n";
  text::write_file(pdir / "transform" / "latency.csv", csv);
  return records;
}

std::vector<TransformRecord> load_transform_records(const CaseManifest& cases, const fs::path& pdir) {
  std::vector<TransformRecord> out;
  for (const auto& entry : cases.cases) {
    const fs::path p = pdir / "transform" / (entry.case_id + ".json");
    if (!fs::exists(p)) throw InvalidInput("no transform output for " + entry.case_id + " (expected " + p.string() + ")");
    out.push_back(parse_transform_record(text::read_file(p)));
  }
  return out;
}

std::vector<ValidationReport> run_validate(const CaseManifest& cases, const std::vector<TransformRecord>& transforms,
                                           const PipelineOptions& options, const fs::path& pdir) {
  if (transforms.size() != cases.cases.size()) {
    throw InvalidInput("run_validate: " + std::to_string(transforms.size()) + " transform records for " +
                       std::to_string(cases.cases.size()) + " cases");
  }
  const std::size_t n = cases.cases.size();
  std::vector<ValidationReport> reports(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    const CaseEntry& entry = cases.cases[i];
    if (transforms[i].case_id != entry.case_id) {
      throw InvalidInput("transform record order does not match manifest at " + entry.case_id);
    }
    reports[i] = validate_case(entry, cases.read_source(entry), transforms[i], options, pdir / "work" / entry.case_id);
    check_report(reports[i]);
  });
  const RunSummary summary = summarize(reports);
  text::write_file(pdir / "reports.jsonl", serialize_reports(reports));
  text::write_file(pdir / "summary.json", summary_json(summary));
  text::write_file(pdir / "report.txt",
                   render_report({{std::string(to_string(options.profile)), reports}}, ReportFormat::Text));
  return reports;
}

PipelineResult run_pipeline(const CaseManifest& cases, const PipelineOptions& options,
                            const RetrievalContext* retrieval, const GenerationProvider& provider,
                            const fs::path& out_dir) {
  const fs::path pdir = profile_dir(out_dir, options.profile);
  PipelineResult result;
  result.transforms = run_transform(cases, options, retrieval, provider, pdir);
  result.reports = run_validate(cases, result.transforms, options, pdir);
  result.summary = summarize(result.reports);
  return result;
}

}  // namespace ragomp
