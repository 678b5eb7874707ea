#include "ragomp/embedder.hpp"

#include "ragomp/corpus_store.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

namespace ragomp {

using nlohmann::json;

EmbeddingVector normalize(std::vector<double> raw, std::string provider_tag) {
  if (raw.empty()) throw InvalidInput("embedding has zero dimension");
  double sq = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x)) throw InvalidInput("embedding has a non-finite component");
    sq += x * x;
  }
  if (sq == 0.0) throw InvalidInput("embedding is the zero vector");
  const double norm = std::sqrt(sq);
  for (double& x : raw) x /= norm;
  return {std::move(raw), std::move(provider_tag)};
}

void check_embedding(const EmbeddingVector& v) {
  if (v.values.empty()) throw InvalidInput("embedding has zero dimension");
  double sq = 0.0;
  for (double x : v.values) {
    if (!std::isfinite(x)) throw InvalidInput("embedding has a non-finite component");
    sq += x * x;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > kNormTolerance) throw InvalidInput("embedding is not unit-norm");
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw InvalidInput("cosine_similarity: dimension mismatch " + std::to_string(a.dimension()) + " vs " +
                       std::to_string(b.dimension()));
  }
  if (a.provider_tag != b.provider_tag) {
    throw InvalidInput("cosine_similarity: provider mismatch '" + a.provider_tag + "' vs '" + b.provider_tag + "'");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  return std::clamp(dot, -1.0, 1.0);
}

EmbeddingVector embed(std::string_view text, const EmbeddingProvider& provider) {
  if (text::is_blank(text)) throw InvalidInput("embed: text is empty");
  auto v = provider.embed_text(text);
  check_embedding(v);
  return v;
}

// --- local lexical provider -------------------------------------------------

std::vector<std::string> LocalLexicalEmbedder::tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::pair<std::size_t, double> LocalLexicalEmbedder::bucket_of(std::string_view term) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : term) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  const std::size_t bucket = static_cast<std::size_t>(h % kDimension);
  const double sign = ((h >> 63) & 1U) ? -1.0 : 1.0;
  return {bucket, sign};
}

LocalLexicalEmbedder LocalLexicalEmbedder::fit(const std::vector<std::string>& documents) {
  LocalLexicalEmbedder e;
  e.document_count_ = documents.size();
  for (const auto& doc : documents) {
    auto terms = tokenize(doc);
    std::set<std::string> unique(terms.begin(), terms.end());
    for (const auto& t : unique) ++e.document_frequency_[t];
  }
  std::map<std::string, std::size_t> ordered(e.document_frequency_.begin(), e.document_frequency_.end());
  std::string fingerprint = std::to_string(e.document_count_);
  for (const auto& [term, df] : ordered) {
    fingerprint += '\n';
    fingerprint += term;
    fingerprint += ' ';
    fingerprint += std::to_string(df);
  }
  e.tag_ = "local-tfidf-512/" + text::sha256_hex(fingerprint).substr(0, 12);
  return e;
}

LocalLexicalEmbedder LocalLexicalEmbedder::fit(const CorpusManifest& manifest) {
  std::vector<std::string> docs;
  docs.reserve(manifest.chunks.size());
  for (const auto& c : manifest.chunks) docs.push_back(c.embedding_text());
  return fit(docs);
}

double LocalLexicalEmbedder::idf(std::string_view term) const {
  auto it = document_frequency_.find(std::string(term));
  const double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(document_count_)) / (1.0 + df)) + 1.0;
}

EmbeddingVector LocalLexicalEmbedder::embed_text(std::string_view text) const {
  std::map<std::string, std::size_t> tf;
  for (auto& t : tokenize(text)) ++tf[std::move(t)];
  if (tf.empty()) throw InvalidInput("embed: text has no embeddable terms");
  std::vector<double> raw(kDimension, 0.0);
  for (const auto& [term, count] : tf) {
    auto [bucket, sign] = bucket_of(term);
    raw[bucket] += sign * static_cast<double>(count) * idf(term);
  }
  return normalize(std::move(raw), tag_);
}

// --- remote provider --------------------------------------------------------

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteEmbeddingConfig config)
    : config_(std::move(config)), in_flight_(std::max(1, config_.max_in_flight)) {}

EmbeddingVector RemoteEmbeddingProvider::embed_text(std::string_view text) const {
  const std::string key = net::env_or_empty(config_.api_key_env);
  net::Headers headers;
  if (!key.empty()) headers["Authorization"] = "Bearer " + key;
  const std::string body = json{{"model", config_.model}, {"input", json::array({std::string(text)})}}.dump();

  in_flight_.acquire();
  net::HttpResponse resp;
  try {
    resp = net::with_retries(config_.retry, [&] {
      return net::post_json(config_.endpoint, body, headers, config_.timeout);
    });
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();

  if (resp.status < 200 || resp.status >= 300) {
    throw ProviderError("embedding endpoint returned HTTP " + std::to_string(resp.status), resp.status);
  }
  std::vector<double> values;
  try {
    values = json::parse(resp.body).at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed embedding response: ") + e.what(), resp.status);
  }
  std::size_t expected = 0;
  if (!dimension_.compare_exchange_strong(expected, values.size()) && expected != values.size()) {
    throw ProviderError("embedding dimension changed from " + std::to_string(expected) + " to " +
                            std::to_string(values.size()),
                        resp.status);
  }
  return normalize(std::move(values), tag());
}

}  // namespace ragomp
