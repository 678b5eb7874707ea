#pragma once

#include "ragomp/http_transport.hpp"

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ragomp {

struct CorpusManifest;

// Unit-norm vector tagged with the provider that produced it. Vectors with
// different tags live in different spaces and must not be compared.
struct EmbeddingVector {
  std::vector<double> values;
  std::string provider_tag;

  std::size_t dimension() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

inline constexpr double kNormTolerance = 1e-6;

// L2-normalizes raw. Throws InvalidInput for empty, all-zero or non-finite input.
EmbeddingVector normalize(std::vector<double> raw, std::string provider_tag);

// Throws InvalidInput when the vector violates finiteness, non-zero or unit-norm.
void check_embedding(const EmbeddingVector& v);

// Dot product of two unit vectors, clamped to [-1, 1]. Throws InvalidInput on
// dimension or provider_tag mismatch.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string tag() const = 0;
  // Implementations may assume non-blank text.
  virtual EmbeddingVector embed_text(std::string_view text) const = 0;
};

// Validating front door over any provider.
EmbeddingVector embed(std::string_view text, const EmbeddingProvider& provider);

// Feature-hashed TF-IDF into 512 signed buckets, fitted on a document collection.
class LocalLexicalEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 512;

  static LocalLexicalEmbedder fit(const std::vector<std::string>& documents);
  static LocalLexicalEmbedder fit(const CorpusManifest& manifest);

  // Lower-cased runs of [A-Za-z0-9_].
  static std::vector<std::string> tokenize(std::string_view text);
  // FNV-1a based bucket and sign (+1/-1) for a term.
  static std::pair<std::size_t, double> bucket_of(std::string_view term);

  double idf(std::string_view term) const;
  std::string tag() const override { return tag_; }
  EmbeddingVector embed_text(std::string_view text) const override;

 private:
  LocalLexicalEmbedder() = default;

  std::unordered_map<std::string, std::size_t> document_frequency_;
  std::size_t document_count_ = 0;
  std::string tag_;
};

struct RemoteEmbeddingConfig {
  std::string endpoint = "https://api.openai.com/v1/embeddings";
  std::string model = "text-embedding-ada-002";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_in_flight = 4;
  net::RetryPolicy retry{};
  std::chrono::seconds timeout{60};
};

// Speaks the common embeddings wire format: POST {model, input:[text]} and reads
// data[0].embedding. The dimension is pinned by the first response.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteEmbeddingConfig config);

  std::string tag() const override { return "remote:" + config_.model; }
  EmbeddingVector embed_text(std::string_view text) const override;
  std::size_t pinned_dimension() const { return dimension_.load(); }

 private:
  RemoteEmbeddingConfig config_;
  mutable std::counting_semaphore<> in_flight_;
  mutable std::atomic<std::size_t> dimension_{0};
};

}  // namespace ragomp
