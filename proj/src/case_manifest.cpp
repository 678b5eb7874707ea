#include "ragomp/case_manifest.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <regex>
#include <set>

namespace ragomp {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path CaseManifest::resolve(const CaseEntry& entry) const {
  fs::path p(entry.serial_path);
  return p.is_absolute() ? p : base_dir / p;
}

std::string CaseManifest::read_source(const CaseEntry& entry) const { return text::read_file(resolve(entry)); }

std::string serialize_cases(const std::vector<CaseEntry>& cases) {
  std::string out;
  for (const auto& c : cases) {
    out += json{{"case_id", c.case_id},
                {"serial_path", c.serial_path},
                {"input_args", c.input_args},
                {"unparallelizable", c.unparallelizable}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<CaseEntry> parse_cases(std::string_view jsonl) {
  std::vector<CaseEntry> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(jsonl)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    try {
      auto j = json::parse(line);
      CaseEntry c;
      c.case_id = j.at("case_id").get<std::string>();
      c.serial_path = j.at("serial_path").get<std::string>();
      c.input_args = j.value("input_args", std::vector<std::string>{});
      c.unparallelizable = j.value("unparallelizable", false);
      if (!ids.insert(c.case_id).second) throw ParseError("case manifest: duplicate case_id " + c.case_id, line_no);
      out.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw ParseError(std::string("case manifest: ") + e.what(), line_no);
    }
  }
  return out;
}

CaseManifest load_case_manifest(const fs::path& path) {
  CaseManifest m;
  m.cases = parse_cases(text::read_file(path));
  m.base_dir = path.parent_path();
  return m;
}

void save_case_manifest(const std::vector<CaseEntry>& cases, const fs::path& path) {
  text::write_file(path, serialize_cases(cases));
}

std::string next_case_id(const std::vector<CaseEntry>& cases) {
  static const std::regex re(R"(^case(\d+)$)");
  long highest = 0;
  for (const auto& c : cases) {
    std::smatch m;
    if (std::regex_match(c.case_id, m, re)) highest = std::max(highest, std::stol(m[1].str()));
  }
  return "case" + std::to_string(highest + 1);
}

}  // namespace ragomp
