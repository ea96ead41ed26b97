#include "medaide/retrieval/index.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "medaide/common/error.hpp"

namespace medaide::retrieval {

std::size_t InvertedIndex::posting_count() const {
  std::size_t n = 0;
  for (const auto& [_, ids] : postings) n += ids.size();
  return n;
}

nlohmann::json InvertedIndex::to_json() const {
  return {{"store", store}, {"doc_count", doc_count}, {"postings", postings}};
}

InvertedIndex InvertedIndex::from_json(const nlohmann::json& j) {
  InvertedIndex idx;
  idx.store = j.value("store", std::string());
  idx.doc_count = j.at("doc_count").get<std::size_t>();
  idx.postings = j.at("postings").get<std::map<std::string, std::vector<std::string>>>();
  return idx;
}

InvertedIndex build_index(const std::vector<CorpusDocument>& docs, const Stopwords& stopwords,
                          const std::string& store) {
  InvertedIndex idx;
  idx.store = store;
  std::set<std::string> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw Error(ErrorCode::kDuplicateId, d.id);
    for (auto& term : index_terms(d.text(), stopwords)) idx.postings[term].push_back(d.id);
  }
  for (auto& [_, list] : idx.postings) std::sort(list.begin(), list.end());
  idx.doc_count = docs.size();
  return idx;
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "all") return MatchMode::kAll;
  if (name == "any") return MatchMode::kAny;
  throw Error(ErrorCode::kConfig, "keyword mode must be 'all' or 'any', got '" + std::string(name) + "'");
}

std::string_view to_string(MatchMode mode) { return mode == MatchMode::kAll ? "all" : "any"; }

std::vector<std::string> keyword_retrieve(const std::vector<std::string>& terms, const InvertedIndex& index,
                                          MatchMode mode) {
  if (terms.empty()) return {};
  std::vector<std::string> result;
  bool first = true;
  for (const auto& term : terms) {
    const auto it = index.postings.find(term);
    if (it == index.postings.end()) {
      if (mode == MatchMode::kAll) return {};
      continue;
    }
    if (first) {
      result = it->second;
      first = false;
      continue;
    }
    std::vector<std::string> merged;
    if (mode == MatchMode::kAll) {
      std::set_intersection(result.begin(), result.end(), it->second.begin(), it->second.end(),
                            std::back_inserter(merged));
    } else {
      std::set_union(result.begin(), result.end(), it->second.begin(), it->second.end(), std::back_inserter(merged));
    }
    result = std::move(merged);
  }
  return result;
}

}  // namespace medaide::retrieval
