#pragma once

#include "ragomp/validation_lab.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ragomp {

struct RunSummary {
  std::size_t total_cases = 0;
  std::size_t compile_success = 0;
  std::size_t fixable_failures = 0;
  std::size_t excluded_unparallelizable = 0;
  // compile_success / (total - excluded); absent when every case is excluded.
  std::optional<double> effective_success_rate;

  bool operator==(const RunSummary&) const = default;
};

// Excluded cases count only as excluded, whatever their compile outcome.
RunSummary summarize(const std::vector<ValidationReport>& reports);

enum class ReportFormat { Text, Csv, Json };
ReportFormat parse_report_format(std::string_view s);  // UsageError on unknown names

using LabelledReports = std::pair<std::string, std::vector<ValidationReport>>;

// Table of compilation outcomes, one column per labelled run. Percentages carry
// one decimal place; an undefined rate renders as "n/a".
std::string render_report(const std::vector<LabelledReports>& runs, ReportFormat format);

// "82/108 (75.9%)" style cell, or "n/a" for a zero denominator.
std::string ratio_cell(std::size_t num, std::size_t den);

std::string serialize_reports(const std::vector<ValidationReport>& reports);
std::vector<ValidationReport> parse_reports(std::string_view jsonl);
std::vector<ValidationReport> load_reports(const std::filesystem::path& path);
std::string summary_json(const RunSummary& s);

}  // namespace ragomp
