#include "ragomp/prompt_forge.hpp"

#include "ragomp/corpus_store.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <algorithm>
#include <regex>

namespace ragomp {

namespace {

std::string end_context(const std::string& tag) { return "<<<END CONTEXT tag=" + tag + ">>>"; }
std::string end_code(const std::string& tag) { return "<<<END SERIAL CODE tag=" + tag + ">>>"; }

// Picks a tag whose closing sentinel does not occur inside body.
template <typename EndFn>
std::string tag_for(std::string_view body, EndFn end_sentinel) {
  const std::string digest = text::sha256_hex(body);
  for (std::size_t len = 8; len <= digest.size(); len *= 2) {
    std::string tag = digest.substr(0, len);
    if (body.find(end_sentinel(tag)) == std::string_view::npos) return tag;
  }
  for (unsigned n = 0;; ++n) {
    std::string tag = digest + "-" + std::to_string(n);
    if (body.find(end_sentinel(tag)) == std::string_view::npos) return tag;
  }
}

std::size_t find_once(std::string_view haystack, std::string_view needle) {
  const auto pos = haystack.find(needle);
  if (pos == std::string_view::npos || haystack.find(needle, pos + 1) != std::string_view::npos) {
    throw InvalidInput("prompt template must contain " + std::string(needle) + " exactly once");
  }
  return pos;
}

}  // namespace

std::string default_prompt_template() {
  return "You are an expert in OpenMP and C++ performance engineering. Parallelize the serial C++ program\n"
         "below by adding OpenMP directives where they are safe and profitable.\n"
         "Preserve the observable behaviour of the program: it must print the same results for every thread count.\n"
         "The code must compile with g++ -fopenmp -std=c++17. Declare every variable named in a data-sharing\n"
         "clause, list all variables when using default(none), use reduction only on arithmetic scalars or\n"
         "arrays, apply collapse only to perfectly nested loops, and parallelize only loops over integers or\n"
         "random-access iterators.\n"
         "Return the complete program in a single ```cpp fenced code block.\n"
         "\n"
         "Reference material retrieved from OpenMP tutorials:\n"
         "{{context}}\n"
         "\n"
         "Serial program:\n"
         "{{code}}\n";
}

PromptBundle build_prompt(std::string_view serial_code, const std::vector<RetrievalHit>& hits,
                          const CorpusManifest& manifest, std::string_view prompt_template) {
  if (text::is_blank(serial_code)) throw InvalidInput("build_prompt: serial code is empty");
  const std::size_t ctx_pos = find_once(prompt_template, kContextPlaceholder);
  const std::size_t code_pos = find_once(prompt_template, kCodePlaceholder);
  if (code_pos < ctx_pos) throw InvalidInput("prompt template must place {{context}} before {{code}}");

  std::vector<RetrievalHit> ordered = hits;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RetrievalHit& a, const RetrievalHit& b) { return a.rank < b.rank; });

  PromptBundle bundle;
  bundle.serial_code = std::string(serial_code);
  bundle.instruction = std::string(prompt_template.substr(0, ctx_pos));
  if (bundle.instruction.find(kCorrectnessClause) == std::string::npos) {
    if (!bundle.instruction.empty() && bundle.instruction.back() != '\n') bundle.instruction += '\n';
    bundle.instruction += std::string(kCorrectnessClause) + "\n";
  }

  std::string context;
  for (const auto& hit : ordered) {
    const CorpusChunk* chunk = manifest.find(hit.chunk_id);
    if (!chunk) throw IntegrityError("retrieval hit references unknown chunk_id: " + hit.chunk_id);
    bundle.context_blocks.emplace_back(chunk->chunk_id, chunk->body);
    const std::string tag = tag_for(chunk->body, end_context);
    context += "<<<CONTEXT rank=" + std::to_string(hit.rank) + " chunk=" + chunk->chunk_id + " tag=" + tag + ">>>\n";
    context += chunk->body;
    context += "\n" + end_context(tag) + "\n";
  }
  if (ordered.empty()) context = std::string(kNoContextMarker) + "\n";
  if (!context.empty() && context.back() == '\n') context.pop_back();

  const std::string code_tag = tag_for(serial_code, end_code);
  std::string code_section = "<<<SERIAL CODE tag=" + code_tag + ">>>\n";
  code_section += serial_code;
  code_section += "\n" + end_code(code_tag);

  const auto middle = prompt_template.substr(ctx_pos + kContextPlaceholder.size(),
                                             code_pos - ctx_pos - kContextPlaceholder.size());
  const auto tail = prompt_template.substr(code_pos + kCodePlaceholder.size());
  bundle.rendered = bundle.instruction + context + std::string(middle) + code_section + std::string(tail);
  bundle.token_estimate = text::whitespace_token_count(bundle.rendered);
  return bundle;
}

ParsedPrompt parse_prompt(std::string_view rendered) {
  static const std::regex ctx_begin(R"(<<<CONTEXT rank=\d+ chunk=(.+?) tag=([0-9a-f\-]+)>>>\n)");
  static const std::regex code_begin(R"(<<<SERIAL CODE tag=([0-9a-f\-]+)>>>\n)");
  ParsedPrompt out;
  const std::string text(rendered);

  std::smatch code_m;
  std::size_t cursor = 0;
  // Context blocks come before the code section; walk them in order so a
  // body that happens to mention a sentinel cannot confuse the parser.
  for (;;) {
    std::smatch m;
    auto begin = text.cbegin() + static_cast<long>(cursor);
    const bool have_ctx = std::regex_search(begin, text.cend(), m, ctx_begin);
    const bool have_code = std::regex_search(begin, text.cend(), code_m, code_begin);
    if (!have_ctx || (have_code && code_m.position(0) < m.position(0))) break;
    const std::size_t body_start = cursor + static_cast<std::size_t>(m.position(0) + m.length(0));
    const std::string closing = "\n" + end_context(m[2].str());
    const std::size_t body_end = text.find(closing, body_start);
    if (body_end == std::string::npos) throw ParseError("prompt: unterminated context block", 0);
    out.context_blocks.emplace_back(m[1].str(), text.substr(body_start, body_end - body_start));
    cursor = body_end + closing.size();
  }
  out.no_context_marker = out.context_blocks.empty() && text.find(kNoContextMarker, cursor) != std::string::npos;

  auto begin = text.cbegin() + static_cast<long>(cursor);
  if (!std::regex_search(begin, text.cend(), code_m, code_begin)) throw ParseError("prompt: no serial code section", 0);
  const std::size_t body_start = cursor + static_cast<std::size_t>(code_m.position(0) + code_m.length(0));
  const std::string closing = "\n" + end_code(code_m[1].str());
  const std::size_t body_end = text.find(closing, body_start);
  if (body_end == std::string::npos) throw ParseError("prompt: unterminated serial code section", 0);
  out.serial_code = text.substr(body_start, body_end - body_start);
  return out;
}

}  // namespace ragomp
