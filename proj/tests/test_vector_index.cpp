#include "ragomp/corpus_store.hpp"
#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/vector_index.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace ragomp;

namespace {

CorpusManifest three_chunks() {
  CorpusManifest m;
  m.chunks.push_back({"t.md#001", "t.md", {"Reductions"}, "reduction clause sums scalar", 4});
  m.chunks.push_back({"t.md#002", "t.md", {"Atomics"}, "atomic histogram update bins", 4});
  m.chunks.push_back({"t.md#003", "t.md", {"Collapse"}, "collapse nested rectangular loops", 4});
  m.corpus_version = compute_corpus_version(m.chunks);
  return m;
}

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  for (auto& x : v) x = g(rng);
  return normalize(std::move(v), "rand");
}

}  // namespace

TEST_CASE("build gives one entry per chunk and is byte-deterministic") {
  const auto m = three_chunks();
  const auto e = LocalLexicalEmbedder::fit(m);
  const auto a = FlatIndex::build(m, e);
  const auto b = FlatIndex::build(m, e);
  CHECK(a.size() == 3);
  CHECK(a.serialize() == b.serialize());
  CHECK(FlatIndex::parse(a.serialize()).serialize() == a.serialize());
}

TEST_CASE("duplicate chunk ids fail the build") {
  auto m = three_chunks();
  m.chunks[2].chunk_id = m.chunks[0].chunk_id;
  const auto e = LocalLexicalEmbedder::fit(m);
  CHECK_THROWS_AS(FlatIndex::build(m, e), Error);
}

TEST_CASE("self retrieval and truncation") {
  std::mt19937_64 rng(7);
  std::vector<IndexEntry> entries;
  for (int i = 0; i < 5; ++i) entries.push_back({"c" + std::to_string(i), random_unit(rng, 16)});
  const FlatIndex idx("rand", 16, entries);
  const auto hits = idx.query_topk(entries[3].vector, 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].chunk_id == "c3");
  CHECK(hits[0].rank == 1);
  CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(idx.query_topk(entries[0].vector, 50).size() == 5);
  CHECK_THROWS_AS(idx.query_topk(entries[0].vector, 0), InvalidInput);
  CHECK_THROWS_AS(idx.query_topk(normalize({1, 0}, "rand"), 1), InvalidInput);
}

TEST_CASE("50 random vectors agree with a full sort") {
  std::mt19937_64 rng(11);
  std::vector<IndexEntry> entries;
  for (int i = 0; i < 50; ++i) entries.push_back({"v" + std::to_string(100 + i), random_unit(rng, 8)});
  const FlatIndex idx("rand", 8, entries);
  const auto q = random_unit(rng, 8);

  std::vector<std::pair<double, std::string>> all;
  for (const auto& e : entries) {
    double dot = 0;
    for (std::size_t d = 0; d < 8; ++d) dot += e.vector.values[d] * q.values[d];
    all.emplace_back(dot, e.chunk_id);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const auto hits = idx.query_topk(q, 5);
  REQUIRE(hits.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(hits[i].chunk_id == all[i].second);
    CHECK(hits[i].score == doctest::Approx(all[i].first).epsilon(1e-9));
    CHECK(hits[i].rank == i + 1);
  }
}

TEST_CASE("ties are broken by ascending chunk id") {
  const auto v = normalize({1, 0}, "t");
  const FlatIndex idx("t", 2, {{"b", v}, {"c", v}, {"a", v}});
  const auto hits = idx.query_topk(v, 3);
  CHECK(hits[0].chunk_id == "a");
  CHECK(hits[1].chunk_id == "b");
  CHECK(hits[2].chunk_id == "c");
}

TEST_CASE("index must agree with the manifest it was built from") {
  const auto m = three_chunks();
  const auto idx = FlatIndex::build(m, LocalLexicalEmbedder::fit(m));
  CHECK_NOTHROW(idx.check_against(m));
  auto smaller = m;
  smaller.chunks.pop_back();
  CHECK_THROWS_AS(idx.check_against(smaller), IntegrityError);
}

TEST_CASE("index persists to disk") {
  testsupport::TempDir dir;
  const auto m = three_chunks();
  const auto idx = FlatIndex::build(m, LocalLexicalEmbedder::fit(m));
  idx.save(dir / "i.jsonl");
  const auto back = FlatIndex::load(dir / "i.jsonl");
  CHECK(back.entries() == idx.entries());
  CHECK(back.provider_tag() == idx.provider_tag());
}
