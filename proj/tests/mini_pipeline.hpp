#pragma once

#include "ragomp/case_manifest.hpp"
#include "ragomp/corpus_store.hpp"
#include "ragomp/embedder.hpp"
#include "ragomp/pipeline.hpp"
#include "ragomp/vector_index.hpp"

#include "test_support.hpp"

namespace testsupport {

// Corpus, index and replay provider for the five-case fixture manifest.
struct MiniPipeline {
  ragomp::CorpusManifest corpus = ragomp::ingest_corpus(source_dir() / "data" / "corpus").manifest;
  ragomp::LocalLexicalEmbedder embedder = ragomp::LocalLexicalEmbedder::fit(corpus);
  ragomp::FlatIndex index = ragomp::FlatIndex::build(corpus, embedder);
  ragomp::RetrievalContext retrieval{corpus, index, embedder};
  ragomp::CaseManifest cases = ragomp::load_case_manifest(fixtures() / "mini" / "cases.jsonl");
  ragomp::ReplayProvider replay{fixtures() / "mini" / "replay"};

  ragomp::PipelineOptions options(ragomp::Profile profile) const {
    ragomp::PipelineOptions o;
    o.profile = profile;
    o.workers = 2;
    return o;
  }
};

}  // namespace testsupport
