#pragma once

#include "ragomp/case_manifest.hpp"
#include "ragomp/validation_lab.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

// The ten algorithmic categories searched for candidate programs.
const std::vector<std::string>& harvest_categories();
// Editable defaults: category -> search keywords.
std::map<std::string, std::string> default_category_keywords();

enum class RejectionReason { NoInclude, NoForLoop, TooShort, CompileFail, Empty };

std::string_view to_string(RejectionReason r);

struct SnippetCandidate {
  std::string origin_url;
  std::string category;
  std::string raw_code;
  std::optional<std::string> cleaned_code;
  std::optional<RejectionReason> rejection_reason;
};

// Read-only view of a Q&A site API. `path_and_query` is e.g.
// "/2.3/search/advanced?...". Non-success responses raise FetchError.
class QaApi {
 public:
  virtual ~QaApi() = default;
  virtual nlohmann::json get(const std::string& path_and_query) const = 0;
  // Honour a server-requested pause between requests.
  virtual void backoff(int seconds) const = 0;
};

struct StackExchangeConfig {
  std::string base_url = "https://api.stackexchange.com";
  std::string api_key_env = "STACKEXCHANGE_KEY";
  std::string site = "stackoverflow";
  std::chrono::seconds timeout{30};
};

class StackExchangeApi final : public QaApi {
 public:
  explicit StackExchangeApi(StackExchangeConfig config) : config_(std::move(config)) {}
  nlohmann::json get(const std::string& path_and_query) const override;
  void backoff(int seconds) const override;

 private:
  StackExchangeConfig config_;
};

// Directory of recorded {request, status, response} JSON files.
class FixtureQaApi final : public QaApi {
 public:
  explicit FixtureQaApi(const std::filesystem::path& dir);
  nlohmann::json get(const std::string& path_and_query) const override;
  void backoff(int) const override {}

 private:
  std::map<std::string, std::pair<int, nlohmann::json>> responses_;
};

// Forwards to another API and stores every response as a fixture record.
class RecordingQaApi final : public QaApi {
 public:
  RecordingQaApi(const QaApi& inner, std::filesystem::path dir) : inner_(inner), dir_(std::move(dir)) {}
  nlohmann::json get(const std::string& path_and_query) const override;
  void backoff(int seconds) const override { inner_.backoff(seconds); }

 private:
  const QaApi& inner_;
  std::filesystem::path dir_;
};

std::string question_search_request(std::string_view keywords, int page, std::string_view site = "stackoverflow");
std::string answers_request(const std::vector<long long>& answer_ids, std::string_view site = "stackoverflow");

// Accepted answers for the category's keyword query, pages 1..max_pages, one
// candidate per <pre><code> block, in API order.
std::vector<SnippetCandidate> fetch_candidates(const std::string& category, const std::string& keywords,
                                               int max_pages, const QaApi& api);

// Code blocks from an answer body in HTML, entities decoded.
std::vector<std::string> extract_html_code_blocks(std::string_view html);

struct FilterOptions {
  std::size_t min_lines = 10;
};

// Filters, in order: remove I/O statements, remove comments, require an
// #include, require a for-loop with a body, require min_lines non-blank lines.
// The first failure names the rejection. Survivors whose original printed values
// get a deterministic RESULT print appended to main.
SnippetCandidate clean_and_filter(SnippetCandidate candidate, const FilterOptions& options = {});

// Individual cleaning steps, exposed for testing.
struct IoStripResult {
  std::string code;
  std::vector<std::string> printed_identifiers;
};
IoStripResult strip_io_statements(std::string_view code);
std::string strip_comments(std::string_view code);
bool has_include_directive(std::string_view code);
bool has_for_loop_with_body(std::string_view code);
std::size_t non_blank_line_count(std::string_view code);
std::string add_result_harness(std::string_view code, const std::vector<std::string>& identifiers);

// Compile-gates cleaned code without OpenMP.
SnippetCandidate compile_filter(SnippetCandidate candidate, const std::filesystem::path& work_dir,
                                const CompilerConfig& config = {std::string(kSerialCompileTemplate)});

// Writes the survivor to cases_dir/<case_id>.cc and appends a manifest entry
// with the next sequential case id. Returns the new entry.
CaseEntry append_survivor(std::vector<CaseEntry>& cases, const SnippetCandidate& survivor,
                          const std::filesystem::path& cases_dir, const std::filesystem::path& manifest_dir);

struct HarvestOptions {
  int max_pages = 15;
  FilterOptions filter{};
  CompilerConfig compiler{std::string(kSerialCompileTemplate)};
  std::size_t workers = 4;
};

struct HarvestResult {
  std::vector<SnippetCandidate> candidates;  // every candidate with its outcome
  std::vector<CaseEntry> added;
};

// Fetch -> clean/filter -> compile -> append for each category in order.
HarvestResult harvest(const std::map<std::string, std::string>& keywords_by_category, const QaApi& api,
                      std::vector<CaseEntry>& cases, const std::filesystem::path& cases_dir,
                      const std::filesystem::path& manifest_dir, const std::filesystem::path& work_dir,
                      const HarvestOptions& options = {});

nlohmann::json candidate_to_json(const SnippetCandidate& c);

}  // namespace ragomp
