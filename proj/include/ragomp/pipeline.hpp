#pragma once

#include "ragomp/case_manifest.hpp"
#include "ragomp/config.hpp"
#include "ragomp/corpus_store.hpp"
#include "ragomp/embedder.hpp"
#include "ragomp/generation_client.hpp"
#include "ragomp/prompt_forge.hpp"
#include "ragomp/report.hpp"
#include "ragomp/validation_lab.hpp"
#include "ragomp/vector_index.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragomp {

// Everything retrieval needs. Absent for the baseline profile.
struct RetrievalContext {
  const CorpusManifest& manifest;
  const FlatIndex& index;
  const EmbeddingProvider& embedder;
};

struct PipelineOptions {
  Profile profile = Profile::Augmented;
  std::size_t top_k = kDefaultTopK;
  std::string model = std::string(kDefaultModel);
  double temperature = kDefaultTemperature;
  std::string prompt_template = default_prompt_template();
  std::vector<int> diff_threads{1, 8};
  std::size_t workers = 4;
  double relative_tolerance = kDefaultRelativeTolerance;
  CompilerConfig compiler{};
  std::chrono::milliseconds run_timeout{120'000};
};

PipelineOptions options_from_config(const AppConfig& config);

// Output of the transform stage for one case. Persisted as
// <profile_dir>/transform/<case_id>.json; latency is kept out of it so that
// repeated runs produce identical files.
struct TransformRecord {
  std::string case_id;
  std::string profile;
  std::vector<RetrievalHit> hits;
  std::string prompt;
  std::string prompt_sha256;
  std::string provider;
  std::string raw_reply;
  std::optional<std::string> extracted_code;
  std::string error;  // non-empty when generation failed for this case

  bool operator==(const TransformRecord&) const = default;
};

std::string transform_record_json(const TransformRecord& r);
TransformRecord parse_transform_record(std::string_view text);

std::filesystem::path profile_dir(const std::filesystem::path& out_dir, Profile profile);

// Retrieve (augmented only), build the prompt and generate for one case.
// Provider failures are recorded in `error`, not thrown.
TransformRecord transform_case(const CaseEntry& entry, std::string_view serial_source, const PipelineOptions& options,
                               const RetrievalContext* retrieval, const GenerationProvider& provider,
                               std::chrono::milliseconds* latency = nullptr);

// Compile gate, classification and differential testing for one case. Work
// files go to work_dir. Environment errors (missing compiler) propagate.
ValidationReport validate_case(const CaseEntry& entry, std::string_view serial_source, const TransformRecord& transform,
                               const PipelineOptions& options, const std::filesystem::path& work_dir);

// Stage: transform every case, writing transform/<id>.json, generated/<id>.cc
// and transform/latency.csv under profile_dir.
std::vector<TransformRecord> run_transform(const CaseManifest& cases, const PipelineOptions& options,
                                           const RetrievalContext* retrieval, const GenerationProvider& provider,
                                           const std::filesystem::path& profile_dir);

std::vector<TransformRecord> load_transform_records(const CaseManifest& cases,
                                                    const std::filesystem::path& profile_dir);

// Stage: validate every case, writing reports.jsonl, summary.json and
// report.txt under profile_dir. Reports are in manifest order.
std::vector<ValidationReport> run_validate(const CaseManifest& cases, const std::vector<TransformRecord>& transforms,
                                           const PipelineOptions& options, const std::filesystem::path& profile_dir);

struct PipelineResult {
  std::vector<TransformRecord> transforms;
  std::vector<ValidationReport> reports;
  RunSummary summary;
};

PipelineResult run_pipeline(const CaseManifest& cases, const PipelineOptions& options,
                            const RetrievalContext* retrieval, const GenerationProvider& provider,
                            const std::filesystem::path& out_dir);

}  // namespace ragomp
