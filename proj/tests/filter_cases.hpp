#pragma once

#include "ragomp/harvester.hpp"
#include "ragomp/text_util.hpp"

#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace testsupport {

struct FilterCase {
  std::string file;
  std::string expected;  // rejection reason name, or "accepted"
  std::string code;
};

inline std::vector<FilterCase> filter_cases() {
  const auto dir = fixtures() / "filters";
  const auto expected = nlohmann::json::parse(ragomp::text::read_file(dir / "expected.json"));
  std::vector<FilterCase> out;
  for (const auto& [file, reason] : expected.items()) {
    out.push_back({file, reason.get<std::string>(), ragomp::text::read_file(dir / file)});
  }
  return out;
}

// Full harvester gate: clean/filter, then compile survivors.
inline std::string filter_outcome(const std::string& code, const std::filesystem::path& work_dir) {
  ragomp::SnippetCandidate c;
  c.raw_code = code;
  c = ragomp::clean_and_filter(std::move(c));
  if (c.cleaned_code) c = ragomp::compile_filter(std::move(c), work_dir);
  return c.rejection_reason ? std::string(ragomp::to_string(*c.rejection_reason)) : "accepted";
}

}  // namespace testsupport
