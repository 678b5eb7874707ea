#pragma once

#include "ragomp/embedder.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

struct CorpusManifest;

struct IndexEntry {
  std::string chunk_id;
  EmbeddingVector vector;
  bool operator==(const IndexEntry&) const = default;
};

struct RetrievalHit {
  std::string chunk_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  bool operator==(const RetrievalHit&) const = default;
};

inline constexpr std::size_t kDefaultTopK = 4;

// Exact (brute-force) cosine index. Immutable after construction, so concurrent
// queries are safe.
class FlatIndex {
 public:
  // Validates tag/dimension agreement, unit norms and chunk_id uniqueness.
  FlatIndex(std::string provider_tag, std::size_t dimension, std::vector<IndexEntry> entries);

  // One entry per chunk, in manifest order. Failures name the offending chunk_id.
  static FlatIndex build(const CorpusManifest& manifest, const EmbeddingProvider& provider);

  // min(k, size()) hits by descending score, ties broken by ascending chunk_id.
  std::vector<RetrievalHit> query_topk(const EmbeddingVector& query, std::size_t k = kDefaultTopK) const;

  // Throws IntegrityError if any entry references a chunk absent from manifest.
  void check_against(const CorpusManifest& manifest) const;

  const std::string& provider_tag() const { return provider_tag_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<IndexEntry>& entries() const { return entries_; }

  // Header line {provider_tag, dimension, count} then one {chunk_id, vector} per line.
  std::string serialize() const;
  static FlatIndex parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static FlatIndex load(const std::filesystem::path& path);

 private:
  std::string provider_tag_;
  std::size_t dimension_;
  std::vector<IndexEntry> entries_;
};

}  // namespace ragomp
