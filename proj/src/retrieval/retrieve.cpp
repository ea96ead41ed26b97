#include "medaide/retrieval/retrieve.hpp"

#include <algorithm>
#include <set>

#include "medaide/common/error.hpp"

namespace medaide::retrieval {

std::vector<ScoredId> semantic_retrieve(const EmbeddingVector& query_vec, const std::vector<CorpusDocument>& docs,
                                        double tau) {
  if (!(tau >= -1.0 && tau <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "tau must lie in [-1, 1]");
  std::vector<ScoredId> out;
  for (const auto& d : docs) {
    if (!d.vector) continue;
    const double s = cosine(query_vec, *d.vector);
    if (s > tau) out.push_back({d.id, s});
  }
  std::sort(out.begin(), out.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return out;
}

RetrievalResult fuse(std::vector<std::string> slice_ids, std::vector<ScoredId> match, double tau) {
  RetrievalResult r;
  std::sort(slice_ids.begin(), slice_ids.end());
  slice_ids.erase(std::unique(slice_ids.begin(), slice_ids.end()), slice_ids.end());
  std::sort(match.begin(), match.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  std::set<std::string> seen;
  for (const auto& m : match) {
    if (seen.insert(m.id).second) r.final_ids.push_back(m.id);
  }
  for (const auto& id : slice_ids) {
    if (seen.insert(id).second) r.final_ids.push_back(id);
  }
  r.slice_ids = std::move(slice_ids);
  r.match = std::move(match);
  r.tau_used = tau;
  return r;
}

RetrievalResult hybrid_retrieve(std::string_view query, const EmbeddingVector* query_vec, const InvertedIndex& index,
                                const std::vector<CorpusDocument>& docs, const Stopwords& stopwords, double tau,
                                MatchMode mode) {
  auto slice = keyword_retrieve(index_terms(query, stopwords), index, mode);
  std::vector<ScoredId> match;
  if (query_vec) match = semantic_retrieve(*query_vec, docs, tau);
  return fuse(std::move(slice), std::move(match), tau);
}

DocumentStore::DocumentStore(std::string id, std::vector<CorpusDocument> docs, Stopwords stopwords)
    : id_(std::move(id)), docs_(std::move(docs)), stopwords_(std::move(stopwords)) {
  for (auto& d : docs_) d.store = id_;
  index_ = build_index(docs_, stopwords_, id_);
}

const CorpusDocument* DocumentStore::find(std::string_view doc_id) const {
  for (const auto& d : docs_) {
    if (d.id == doc_id) return &d;
  }
  return nullptr;
}

std::size_t DocumentStore::embedded_count() const {
  return static_cast<std::size_t>(std::count_if(docs_.begin(), docs_.end(), [](const auto& d) { return d.vector.has_value(); }));
}

void DocumentStore::embed_documents(const gateway::Embedder& embedder) {
  for (auto& d : docs_) d.vector = embedder.embed(d.text());
}

void DocumentStore::attach_vectors(const gateway::EmbeddingTable& table) {
  for (auto& d : docs_) {
    if (const auto* v = table.find(d.id)) d.vector = EmbeddingVector{*v, "file"};
  }
}

void DocumentStore::adopt_index(InvertedIndex index) {
  if (index.doc_count != docs_.size()) {
    throw Error(ErrorCode::kFormat, "persisted index for '" + id_ + "' covers " + std::to_string(index.doc_count) +
                                        " documents, store has " + std::to_string(docs_.size()));
  }
  for (const auto& [term, ids] : index.postings) {
    for (const auto& id : ids) {
      if (!find(id)) throw Error(ErrorCode::kFormat, "persisted index references unknown document '" + id + "'");
    }
  }
  index_ = std::move(index);
}

RetrievalResult DocumentStore::retrieve(std::string_view query, const EmbeddingVector* query_vec, double tau,
                                        MatchMode mode) const {
  return hybrid_retrieve(query, query_vec, index_, docs_, stopwords_, tau, mode);
}

}  // namespace medaide::retrieval
