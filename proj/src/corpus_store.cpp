#include "ragomp/corpus_store.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <regex>
#include <set>

namespace ragomp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Section {
  std::vector<std::string> heading_path;
  std::vector<std::string> lines;
};

struct Paragraph {
  std::string text;
  std::size_t tokens = 0;
};

bool is_fence(std::string_view line) {
  auto t = text::trim(line);
  return t.starts_with("```") || t.starts_with("~~~");
}

// Groups non-blank lines into paragraphs; blank lines inside fences do not split.
std::vector<Paragraph> paragraphs_of(const std::vector<std::string>& lines) {
  std::vector<Paragraph> out;
  std::vector<std::string> current;
  bool in_fence = false;
  auto flush = [&] {
    if (current.empty()) return;
    Paragraph p;
    p.text = text::join(current, "\n");
    p.tokens = text::whitespace_token_count(p.text);
    out.push_back(std::move(p));
    current.clear();
  };
  for (const auto& line : lines) {
    if (is_fence(line)) in_fence = !in_fence;
    if (!in_fence && text::is_blank(line)) {
      flush();
      continue;
    }
    current.push_back(line);
  }
  flush();
  return out;
}

std::string section_text(const std::vector<std::string>& lines) {
  std::size_t b = 0, e = lines.size();
  while (b < e && text::is_blank(lines[b])) ++b;
  while (e > b && text::is_blank(lines[e - 1])) --e;
  std::vector<std::string> kept(lines.begin() + static_cast<long>(b), lines.begin() + static_cast<long>(e));
  return text::join(kept, "\n");
}

std::string chunk_id_for(std::string_view source_doc, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", ordinal);
  return std::string(source_doc) + "#" + buf;
}

json chunk_to_json(const CorpusChunk& c) {
  return json{{"chunk_id", c.chunk_id},
              {"source_doc", c.source_doc},
              {"heading_path", c.heading_path},
              {"body", c.body},
              {"token_estimate", c.token_estimate}};
}

}  // namespace

std::string CorpusChunk::embedding_text() const {
  if (heading_path.empty()) return body;
  return text::join(heading_path, " > ") + "\n" + body;
}

const CorpusChunk* CorpusManifest::find(std::string_view chunk_id) const {
  for (const auto& c : chunks) {
    if (c.chunk_id == chunk_id) return &c;
  }
  return nullptr;
}

std::vector<CorpusChunk> chunk_document(std::string_view text, std::size_t max_tokens,
                                        std::string_view source_doc) {
  if (max_tokens < kMinChunkTokens) {
    throw InvalidInput("max_tokens must be >= " + std::to_string(kMinChunkTokens));
  }
  static const std::regex heading_re(R"(^(#{1,3})[ \t]+(.*?)[ \t]*#*[ \t]*$)");

  std::vector<Section> sections;
  Section current;
  std::array<std::string, 3> heading_slots;
  bool in_fence = false;
  for (auto line : text::split_lines(text)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_fence(line)) in_fence = !in_fence;
    std::smatch m;
    if (!in_fence && std::regex_match(line, m, heading_re)) {
      sections.push_back(std::move(current));
      current = Section{};
      const std::size_t level = m[1].length();
      heading_slots[level - 1] = m[2].str();
      for (std::size_t i = level; i < heading_slots.size(); ++i) heading_slots[i].clear();
      for (const auto& h : heading_slots) {
        if (!h.empty()) current.heading_path.push_back(h);
      }
      continue;
    }
    current.lines.push_back(std::move(line));
  }
  sections.push_back(std::move(current));

  std::vector<CorpusChunk> chunks;
  auto emit = [&](const std::vector<std::string>& headings, std::string body) {
    CorpusChunk c;
    c.chunk_id = chunk_id_for(source_doc, chunks.size() + 1);
    c.source_doc = std::string(source_doc);
    c.heading_path = headings;
    c.token_estimate = text::whitespace_token_count(body);
    c.body = std::move(body);
    chunks.push_back(std::move(c));
  };

  for (const auto& section : sections) {
    std::string whole = section_text(section.lines);
    if (text::is_blank(whole)) continue;
    if (text::whitespace_token_count(whole) <= max_tokens) {
      emit(section.heading_path, std::move(whole));
      continue;
    }
    std::vector<std::string> group;
    std::size_t group_tokens = 0;
    for (auto& para : paragraphs_of(section.lines)) {
      if (!group.empty() && group_tokens + para.tokens > max_tokens) {
        emit(section.heading_path, text::join(group, "\n\n"));
        group.clear();
        group_tokens = 0;
      }
      group.push_back(std::move(para.text));
      group_tokens += para.tokens;
    }
    if (!group.empty()) emit(section.heading_path, text::join(group, "\n\n"));
  }
  return chunks;
}

IngestResult ingest_corpus(const fs::path& root, std::size_t max_tokens) {
  if (!fs::is_directory(root)) throw InvalidInput("corpus root is not a directory: " + root.string());

  std::vector<fs::path> docs;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = text::to_lower(entry.path().extension().string());
    if (ext == ".md" || ext == ".markdown" || ext == ".txt") docs.push_back(entry.path());
  }
  if (docs.empty()) throw CorpusEmpty("no .md/.txt documents under " + root.string());
  std::sort(docs.begin(), docs.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(root).generic_string() < b.lexically_relative(root).generic_string();
  });

  IngestResult result;
  std::size_t readable = 0;
  for (const auto& path : docs) {
    const std::string rel = path.lexically_relative(root).generic_string();
    std::string body;
    try {
      body = text::read_file(path);
    } catch (const EnvironmentError& e) {
      result.warnings.push_back(rel + ": unreadable (" + e.what() + ")");
      continue;
    }
    if (!is_valid_utf8(body)) {
      result.warnings.push_back(rel + ": unreadable (not valid UTF-8)");
      continue;
    }
    ++readable;
    auto chunks = chunk_document(body, max_tokens, rel);
    if (chunks.empty()) {
      result.warnings.push_back(rel + ": no body text");
      continue;
    }
    for (auto& c : chunks) result.manifest.chunks.push_back(std::move(c));
  }
  if (readable == 0 || result.manifest.chunks.empty()) {
    throw CorpusEmpty("no readable document produced a chunk under " + root.string());
  }
  result.manifest.corpus_version = compute_corpus_version(result.manifest.chunks);
  result.manifest.created_at = text::utc_timestamp();
  return result;
}

void validate_manifest(const CorpusManifest& manifest) {
  std::set<std::string_view> seen;
  for (const auto& c : manifest.chunks) {
    if (!seen.insert(c.chunk_id).second) throw IntegrityError("duplicate chunk_id: " + c.chunk_id);
    if (text::is_blank(c.body)) throw IntegrityError("blank body in chunk " + c.chunk_id);
    if (c.token_estimate != text::whitespace_token_count(c.body)) {
      throw IntegrityError("token_estimate mismatch in chunk " + c.chunk_id);
    }
  }
}

std::string compute_corpus_version(const std::vector<CorpusChunk>& chunks) {
  std::string all;
  for (const auto& c : chunks) {
    all += chunk_to_json(c).dump();
    all += '\n';
  }
  return text::sha256_hex(all).substr(0, 16);
}

std::string serialize_manifest(const CorpusManifest& manifest) {
  std::string out = json{{"corpus_version", manifest.corpus_version},
                         {"created_at", manifest.created_at}}
                        .dump();
  out += '\n';
  for (const auto& c : manifest.chunks) {
    out += chunk_to_json(c).dump();
    out += '\n';
  }
  return out;
}

CorpusManifest parse_manifest(std::string_view jsonl) {
  CorpusManifest m;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(jsonl)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what(), line_no);
    }
    try {
      if (!j.contains("chunk_id")) {
        if (line_no != 1) throw ParseError("manifest: header record must be the first line", line_no);
        m.corpus_version = j.value("corpus_version", "");
        m.created_at = j.value("created_at", "");
        continue;
      }
      CorpusChunk c;
      c.chunk_id = j.at("chunk_id").get<std::string>();
      c.source_doc = j.at("source_doc").get<std::string>();
      c.heading_path = j.at("heading_path").get<std::vector<std::string>>();
      c.body = j.at("body").get<std::string>();
      c.token_estimate = j.at("token_estimate").get<std::size_t>();
      m.chunks.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what(), line_no);
    }
  }
  return m;
}

void save_manifest(const CorpusManifest& manifest, const fs::path& path) {
  text::write_file(path, serialize_manifest(manifest));
}

CorpusManifest load_manifest(const fs::path& path) {
  auto m = parse_manifest(text::read_file(path));
  validate_manifest(m);
  return m;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace ragomp
