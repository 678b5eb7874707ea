#include "ragomp/corpus_store.hpp"
#include "ragomp/embedder.hpp"
#include "ragomp/errors.hpp"

#include "test_http_server.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstring>

using namespace ragomp;

namespace {

LocalLexicalEmbedder sample_embedder() {
  return LocalLexicalEmbedder::fit(std::vector<std::string>{
      "reduction clause for parallel sums", "atomic update of histogram bins", "collapse nested loops"});
}

double norm(const EmbeddingVector& v) {
  double s = 0;
  for (double x : v.values) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("local embedding is deterministic and unit norm") {
  const auto e = sample_embedder();
  const auto a = embed("parallel reduction of sums", e);
  const auto b = embed("parallel reduction of sums", e);
  CHECK(a.values.size() == LocalLexicalEmbedder::kDimension);
  CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.provider_tag == e.tag());
}

TEST_CASE("texts with disjoint terms have zero similarity") {
  const auto e = sample_embedder();
  // Disjoint terms can still collide in a hashed bucket, so pick two whose
  // buckets are verified distinct first.
  const auto [ba, sa] = LocalLexicalEmbedder::bucket_of("histogram");
  const auto [bb, sb] = LocalLexicalEmbedder::bucket_of("collapse");
  REQUIRE(ba != bb);
  CHECK(cosine_similarity(embed("histogram", e), embed("collapse", e)) == 0.0);
}

TEST_CASE("blank text is invalid input") {
  const auto e = sample_embedder();
  CHECK_THROWS_AS(embed("", e), InvalidInput);
  CHECK_THROWS_AS(embed("   \n", e), InvalidInput);
}

TEST_CASE("cosine similarity arithmetic") {
  const auto v = normalize({3, 4, 12}, "t");
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0));
  CHECK(cosine_similarity(normalize({1, 0}, "t"), normalize({0, 1}, "t")) == 0.0);
  const auto a = normalize({1, 1, 0}, "t"), b = normalize({1, 0, 0}, "t");
  CHECK(cosine_similarity(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("mismatched spaces are rejected") {
  CHECK_THROWS_AS(cosine_similarity(normalize({1, 0}, "a"), normalize({1, 0}, "b")), InvalidInput);
  CHECK_THROWS_AS(cosine_similarity(normalize({1, 0}, "a"), normalize({1, 0, 0}, "a")), InvalidInput);
  CHECK_THROWS_AS(normalize({0, 0}, "a"), InvalidInput);
  CHECK_THROWS_AS(normalize({NAN, 1}, "a"), InvalidInput);
  CHECK_THROWS_AS(check_embedding(EmbeddingVector{{0.5, 0.5}, "a"}), InvalidInput);
}

TEST_CASE("idf favours rare terms and the tag tracks the fitted corpus") {
  const auto e = sample_embedder();
  CHECK(e.idf("histogram") < e.idf("unseen"));
  CHECK(e.idf("unseen") == doctest::Approx(std::log(4.0 / 1.0) + 1.0));
  const auto common = LocalLexicalEmbedder::fit(std::vector<std::string>{"omp for", "omp atomic", "omp task"});
  CHECK(common.idf("omp") < common.idf("atomic"));
  CHECK(common.tag() != e.tag());
  CHECK(common.tag().rfind("local-tfidf-512/", 0) == 0);
}

TEST_CASE("remote provider speaks the embeddings wire format") {
  testsupport::LocalServer srv;
  std::atomic<int> calls{0};
  srv.server.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    const auto body = nlohmann::json::parse(req.body);
    CHECK(body.at("model") == "test-model");
    const std::string input = body.at("input").at(0);
    nlohmann::json vec = input == "short" ? nlohmann::json::array({1.0, 2.0}) : nlohmann::json::array({3.0, 0.0, 4.0});
    res.set_content(nlohmann::json{{"data", {{{"embedding", vec}}}}}.dump(), "application/json");
  });
  srv.server.Post("/denied", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  srv.start();

  RemoteEmbeddingConfig cfg;
  cfg.endpoint = srv.url("/v1/embeddings");
  cfg.model = "test-model";
  cfg.api_key_env = "RAGOMP_TEST_UNSET_KEY";
  RemoteEmbeddingProvider p(cfg);
  const auto v = embed("some text", p);
  CHECK(v.values == std::vector<double>{0.6, 0.0, 0.8});
  CHECK(v.provider_tag == "remote:test-model");
  CHECK(p.pinned_dimension() == 3);
  CHECK_THROWS_AS(embed("short", p), ProviderError);  // dimension drift

  cfg.endpoint = srv.url("/denied");
  RemoteEmbeddingProvider denied(cfg);
  try {
    embed("x", denied);
    FAIL("expected a provider error");
  } catch (const ProviderError& e) {
    CHECK(e.status() == 401);
  }
}
