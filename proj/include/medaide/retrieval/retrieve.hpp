#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "medaide/gateway/embedding.hpp"
#include "medaide/retrieval/document.hpp"
#include "medaide/retrieval/index.hpp"

namespace medaide::retrieval {

struct ScoredId {
  std::string id;
  double score = 0.0;
};

// Documents with cosine(query, doc) strictly above tau, best first (ties by
// id). Documents without a vector are skipped. tau must lie in [-1, 1].
std::vector<ScoredId> semantic_retrieve(const EmbeddingVector& query_vec, const std::vector<CorpusDocument>& docs,
                                        double tau);

struct RetrievalResult {
  std::vector<std::string> slice_ids;  // keyword channel, sorted by id
  std::vector<ScoredId> match;         // semantic channel, best first
  std::vector<std::string> final_ids;  // union, see fuse()
  double tau_used = 0.0;

  bool empty() const { return final_ids.empty(); }
};

// Union of both channels: semantic hits by descending score, then
// keyword-only documents; ties by id.
RetrievalResult fuse(std::vector<std::string> slice_ids, std::vector<ScoredId> match, double tau);

// Semantic channel is skipped when query_vec is null.
RetrievalResult hybrid_retrieve(std::string_view query, const EmbeddingVector* query_vec, const InvertedIndex& index,
                                const std::vector<CorpusDocument>& docs, const Stopwords& stopwords, double tau,
                                MatchMode mode = MatchMode::kAll);

// A corpus with its index. Immutable once built and embedded; share it
// read-only across sessions.
class DocumentStore {
 public:
  DocumentStore(std::string id, std::vector<CorpusDocument> docs, Stopwords stopwords);

  const std::string& id() const { return id_; }
  const std::vector<CorpusDocument>& documents() const { return docs_; }
  const InvertedIndex& index() const { return index_; }
  const Stopwords& stopwords() const { return stopwords_; }
  const CorpusDocument* find(std::string_view doc_id) const;
  std::size_t embedded_count() const;

  void embed_documents(const gateway::Embedder& embedder);
  // Vectors keyed by document id. Missing ids stay unembedded.
  void attach_vectors(const gateway::EmbeddingTable& table);
  // Adopt a persisted index; it must describe exactly these documents.
  void adopt_index(InvertedIndex index);

  RetrievalResult retrieve(std::string_view query, const EmbeddingVector* query_vec, double tau,
                           MatchMode mode = MatchMode::kAll) const;

 private:
  std::string id_;
  std::vector<CorpusDocument> docs_;
  Stopwords stopwords_;
  InvertedIndex index_;
};

}  // namespace medaide::retrieval
