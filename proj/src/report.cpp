#include "ragomp/report.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>

namespace ragomp {

using nlohmann::json;

RunSummary summarize(const std::vector<ValidationReport>& reports) {
  RunSummary s;
  s.total_cases = reports.size();
  for (const auto& r : reports) {
    if (r.excluded_unparallelizable) ++s.excluded_unparallelizable;
    else if (r.compile_ok) ++s.compile_success;
    else ++s.fixable_failures;
  }
  const std::size_t eligible = s.total_cases - s.excluded_unparallelizable;
  if (eligible > 0) s.effective_success_rate = static_cast<double>(s.compile_success) / static_cast<double>(eligible);
  return s;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw UsageError("unknown report format '" + std::string(s) + "' (expected text, csv or json)");
}

namespace {

std::string percent(std::size_t num, std::size_t den) {
  if (den == 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(num) / static_cast<double>(den));
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

json rate_json(std::size_t num, std::size_t den) {
  if (den == 0) return nullptr;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::map<std::string, std::size_t> category_counts(const std::vector<ValidationReport>& reports) {
  std::map<std::string, std::size_t> out;
  for (const auto& r : reports) {
    if (!r.excluded_unparallelizable && r.failure_category) ++out[std::string(to_string(*r.failure_category))];
  }
  return out;
}

}  // namespace

std::string ratio_cell(std::size_t num, std::size_t den) {
  if (den == 0) return "n/a";
  return std::to_string(num) + "/" + std::to_string(den) + " (" + percent(num, den) + ")";
}

std::string render_report(const std::vector<LabelledReports>& runs, ReportFormat format) {
  std::vector<RunSummary> sums;
  for (const auto& [label, reports] : runs) sums.push_back(summarize(reports));

  if (format == ReportFormat::Json) {
    json out = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& s = sums[i];
      const std::size_t eligible = s.total_cases - s.excluded_unparallelizable;
      out.push_back(json{{"label", runs[i].first},
                         {"total_cases", s.total_cases},
                         {"compile_success", s.compile_success},
                         {"fixable_failures", s.fixable_failures},
                         {"excluded_unparallelizable", s.excluded_unparallelizable},
                         {"compile_success_rate", rate_json(s.compile_success, s.total_cases)},
                         {"effective_success_rate", rate_json(s.compile_success, eligible)},
                         {"failure_categories", category_counts(runs[i].second)}});
    }
    return out.dump(2) + "\n";
  }

  if (format == ReportFormat::Csv) {
    std::string out =
        "label,total_cases,compile_success,fixable_failures,excluded_unparallelizable,compile_success_pct,"
        "fixable_failure_pct,effective_success_pct\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& s = sums[i];
      const std::size_t eligible = s.total_cases - s.excluded_unparallelizable;
      auto pct = [](std::size_t n, std::size_t d) {
        auto p = percent(n, d);
        if (p.back() == '%') p.pop_back();
        return p;
      };
      out += runs[i].first + "," + std::to_string(s.total_cases) + "," + std::to_string(s.compile_success) + "," +
             std::to_string(s.fixable_failures) + "," + std::to_string(s.excluded_unparallelizable) + "," +
             pct(s.compile_success, s.total_cases) + "," + pct(s.fixable_failures, s.total_cases) + "," +
             pct(s.compile_success, eligible) + "\n";
    }
    return out;
  }

  std::vector<std::vector<std::string>> rows = {{"Metric"},
                                                {"Compilation Success"},
                                                {"Failures (Fixable)"},
                                                {"Unparallelizable"},
                                                {"Effective Success"}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& s = sums[i];
    rows[0].push_back(runs[i].first);
    rows[1].push_back(ratio_cell(s.compile_success, s.total_cases));
    rows[2].push_back(ratio_cell(s.fixable_failures, s.total_cases));
    rows[3].push_back(std::to_string(s.excluded_unparallelizable) + "/" + std::to_string(s.total_cases) +
                      " (excluded)");
    rows[4].push_back(ratio_cell(s.compile_success, s.total_cases - s.excluded_unparallelizable));
  }
  std::vector<std::size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += "|";
    for (std::size_t c = 0; c < rows[r].size(); ++c) out += " " + pad(rows[r][c], widths[c]) + " |";
    out += "\n";
    if (r == 0) {
      out += "|";
      for (std::size_t w : widths) out += std::string(w + 2, '-') + "|";
      out += "\n";
    }
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto counts = category_counts(runs[i].second);
    if (counts.empty()) continue;
    out += "\nFailure categories (" + runs[i].first + "):\n";
    for (const auto& [name, n] : counts) out += "  " + pad(name, 22) + std::to_string(n) + "\n";
  }
  return out;
}

std::string serialize_reports(const std::vector<ValidationReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<ValidationReport> parse_reports(std::string_view jsonl) {
  std::vector<ValidationReport> out;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(jsonl)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    try {
      auto r = json::parse(line).get<ValidationReport>();
      check_report(r);
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("reports: ") + e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(std::string("reports: ") + e.what(), line_no);
    }
  }
  return out;
}

std::vector<ValidationReport> load_reports(const std::filesystem::path& path) {
  return parse_reports(text::read_file(path));
}

std::string summary_json(const RunSummary& s) {
  json j{{"total_cases", s.total_cases},
         {"compile_success", s.compile_success},
         {"fixable_failures", s.fixable_failures},
         {"excluded_unparallelizable", s.excluded_unparallelizable},
         {"effective_success_rate",
          s.effective_success_rate ? json(*s.effective_success_rate) : json(nullptr)}};
  return j.dump(2) + "\n";
}

}  // namespace ragomp
