#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

// One line of the per-case manifest. serial_path is stored as written; relative
// paths resolve against the manifest's directory.
struct CaseEntry {
  std::string case_id;
  std::string serial_path;
  std::vector<std::string> input_args;
  bool unparallelizable = false;

  bool operator==(const CaseEntry&) const = default;
};

struct CaseManifest {
  std::vector<CaseEntry> cases;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const CaseEntry& entry) const;
  std::string read_source(const CaseEntry& entry) const;
};

std::string serialize_cases(const std::vector<CaseEntry>& cases);
std::vector<CaseEntry> parse_cases(std::string_view jsonl);
CaseManifest load_case_manifest(const std::filesystem::path& path);
void save_case_manifest(const std::vector<CaseEntry>& cases, const std::filesystem::path& path);

// "case<N>" for the next free sequential number.
std::string next_case_id(const std::vector<CaseEntry>& cases);

}  // namespace ragomp
