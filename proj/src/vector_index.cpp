#include "ragomp/vector_index.hpp"

#include "ragomp/corpus_store.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace ragomp {

using nlohmann::json;

FlatIndex::FlatIndex(std::string provider_tag, std::size_t dimension, std::vector<IndexEntry> entries)
    : provider_tag_(std::move(provider_tag)), dimension_(dimension), entries_(std::move(entries)) {
  if (dimension_ == 0) throw InvalidInput("index dimension must be positive");
  std::set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.chunk_id).second) throw IntegrityError("duplicate chunk_id in index: " + e.chunk_id);
    if (e.vector.provider_tag != provider_tag_) {
      throw IntegrityError("entry " + e.chunk_id + " has provider tag '" + e.vector.provider_tag + "'");
    }
    if (e.vector.dimension() != dimension_) throw IntegrityError("entry " + e.chunk_id + " has wrong dimension");
    check_embedding(e.vector);
  }
}

FlatIndex FlatIndex::build(const CorpusManifest& manifest, const EmbeddingProvider& provider) {
  if (manifest.chunks.empty()) throw InvalidInput("cannot build an index from an empty manifest");
  std::set<std::string_view> seen;
  for (const auto& c : manifest.chunks) {
    if (!seen.insert(c.chunk_id).second) throw IntegrityError("duplicate chunk_id in manifest: " + c.chunk_id);
  }
  std::vector<IndexEntry> entries;
  entries.reserve(manifest.chunks.size());
  for (const auto& c : manifest.chunks) {
    try {
      entries.push_back({c.chunk_id, embed(c.embedding_text(), provider)});
    } catch (const ProviderError& e) {
      throw ProviderError("embedding chunk " + c.chunk_id + " failed: " + e.what(), e.status());
    } catch (const Error& e) {
      throw InvalidInput("embedding chunk " + c.chunk_id + " failed: " + e.what());
    }
  }
  const std::size_t dim = entries.front().vector.dimension();
  return FlatIndex(provider.tag(), dim, std::move(entries));
}

std::vector<RetrievalHit> FlatIndex::query_topk(const EmbeddingVector& query, std::size_t k) const {
  if (k == 0) throw InvalidInput("query_topk: k must be >= 1");
  if (query.provider_tag != provider_tag_) {
    throw InvalidInput("query_topk: query provider '" + query.provider_tag + "' does not match index provider '" +
                       provider_tag_ + "'");
  }
  std::vector<double> scores(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) scores[i] = cosine_similarity(query, entries_[i].vector);

  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t m = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(m), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return entries_[a].chunk_id < entries_[b].chunk_id;
                    });
  std::vector<RetrievalHit> hits;
  hits.reserve(m);
  for (std::size_t r = 0; r < m; ++r) hits.push_back({entries_[order[r]].chunk_id, scores[order[r]], r + 1});
  return hits;
}

void FlatIndex::check_against(const CorpusManifest& manifest) const {
  std::set<std::string_view> ids;
  for (const auto& c : manifest.chunks) ids.insert(c.chunk_id);
  for (const auto& e : entries_) {
    if (!ids.contains(e.chunk_id)) throw IntegrityError("index entry " + e.chunk_id + " is not in the manifest");
  }
}

std::string FlatIndex::serialize() const {
  std::string out =
      json{{"provider_tag", provider_tag_}, {"dimension", dimension_}, {"count", entries_.size()}}.dump();
  out += '\n';
  for (const auto& e : entries_) {
    out += json{{"chunk_id", e.chunk_id}, {"vector", e.vector.values}}.dump();
    out += '\n';
  }
  return out;
}

FlatIndex FlatIndex::parse(std::string_view text) {
  const auto lines = text::split_lines(text);
  if (lines.empty()) throw ParseError("index: missing header", 1);
  std::string tag;
  std::size_t dim = 0, count = 0;
  try {
    auto h = json::parse(lines[0]);
    tag = h.at("provider_tag").get<std::string>();
    dim = h.at("dimension").get<std::size_t>();
    count = h.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("index header: ") + e.what(), 1);
  }
  std::vector<IndexEntry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::is_blank(lines[i])) continue;
    try {
      auto j = json::parse(lines[i]);
      entries.push_back({j.at("chunk_id").get<std::string>(),
                         EmbeddingVector{j.at("vector").get<std::vector<double>>(), tag}});
    } catch (const json::exception& e) {
      throw ParseError(std::string("index entry: ") + e.what(), i + 1);
    }
  }
  if (entries.size() != count) {
    throw ParseError("index: header declares " + std::to_string(count) + " entries, found " +
                         std::to_string(entries.size()),
                     1);
  }
  return FlatIndex(std::move(tag), dim, std::move(entries));
}

void FlatIndex::save(const std::filesystem::path& path) const { text::write_file(path, serialize()); }

FlatIndex FlatIndex::load(const std::filesystem::path& path) { return parse(text::read_file(path)); }

}  // namespace ragomp
