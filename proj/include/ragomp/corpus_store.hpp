#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

// One heading-delimited block of a tutorial document; the unit of retrieval.
struct CorpusChunk {
  std::string chunk_id;
  std::string source_doc;
  std::vector<std::string> heading_path;
  std::string body;
  std::size_t token_estimate = 0;

  // Text handed to the embedder: headings give short sections useful context.
  std::string embedding_text() const;

  bool operator==(const CorpusChunk&) const = default;
};

struct CorpusManifest {
  std::vector<CorpusChunk> chunks;
  std::string corpus_version;
  std::string created_at;

  const CorpusChunk* find(std::string_view chunk_id) const;
  bool operator==(const CorpusManifest&) const = default;
};

inline constexpr std::size_t kDefaultMaxChunkTokens = 400;
inline constexpr std::size_t kMinChunkTokens = 32;

// Splits a markdown/text document on level 1-3 headings, then packs oversized
// sections on blank-line paragraph boundaries. Fenced code blocks are never split.
// Chunk ids are "<source_doc>#NNN" in document order.
std::vector<CorpusChunk> chunk_document(std::string_view text,
                                        std::size_t max_tokens = kDefaultMaxChunkTokens,
                                        std::string_view source_doc = "doc");

struct IngestResult {
  CorpusManifest manifest;
  std::vector<std::string> warnings;
};

// Reads every .md/.markdown/.txt file under root (recursive, sorted by relative path).
IngestResult ingest_corpus(const std::filesystem::path& root,
                           std::size_t max_tokens = kDefaultMaxChunkTokens);

// Throws IntegrityError on duplicate ids, blank bodies or a stale token_estimate.
void validate_manifest(const CorpusManifest& manifest);

// Line-delimited JSON: a header record {corpus_version, created_at} followed by one
// chunk object per line.
std::string serialize_manifest(const CorpusManifest& manifest);
CorpusManifest parse_manifest(std::string_view jsonl);
void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);
CorpusManifest load_manifest(const std::filesystem::path& path);

// Content hash of the chunk list, independent of created_at.
std::string compute_corpus_version(const std::vector<CorpusChunk>& chunks);

bool is_valid_utf8(std::string_view s);

}  // namespace ragomp
