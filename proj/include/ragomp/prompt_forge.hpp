#pragma once

#include "ragomp/vector_index.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ragomp {

struct CorpusManifest;

struct PromptBundle {
  std::string instruction;
  std::vector<std::pair<std::string, std::string>> context_blocks;  // (chunk_id, body) in rank order
  std::string serial_code;
  std::string rendered;
  std::size_t token_estimate = 0;
};

inline constexpr std::string_view kContextPlaceholder = "{{context}}";
inline constexpr std::string_view kCodePlaceholder = "{{code}}";
inline constexpr std::string_view kNoContextMarker = "<<<NO RETRIEVED CONTEXT>>>";

// Always present in the instruction part of a rendered prompt, whether or not
// the template already says it.
inline constexpr std::string_view kCorrectnessClause =
    "The result must be syntactically correct OpenMP C++ and must preserve the semantics of the serial program.";

// Instruction template shipped with the tool. It paraphrases the intent of the
// original prompt; see docs/prompt_template.md.
std::string default_prompt_template();

// Template must contain {{context}} followed later by {{code}}, each exactly once.
// Hits referencing chunks absent from the manifest raise IntegrityError.
PromptBundle build_prompt(std::string_view serial_code, const std::vector<RetrievalHit>& hits,
                          const CorpusManifest& manifest, std::string_view prompt_template);

struct ParsedPrompt {
  std::vector<std::pair<std::string, std::string>> context_blocks;
  bool no_context_marker = false;
  std::string serial_code;
};

// Re-extracts the delimited sections of a rendered prompt byte-exactly.
ParsedPrompt parse_prompt(std::string_view rendered);

}  // namespace ragomp
