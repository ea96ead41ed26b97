#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "medaide/retrieval/document.hpp"

namespace medaide::retrieval {

struct InvertedIndex {
  std::string store;
  std::size_t doc_count = 0;
  std::map<std::string, std::vector<std::string>> postings;  // sorted, duplicate-free ids

  std::size_t term_count() const { return postings.size(); }
  std::size_t posting_count() const;

  nlohmann::json to_json() const;
  static InvertedIndex from_json(const nlohmann::json& j);
};

// Throws DuplicateId.
InvertedIndex build_index(const std::vector<CorpusDocument>& docs, const Stopwords& stopwords,
                          const std::string& store = {});

enum class MatchMode { kAll, kAny };

MatchMode parse_match_mode(std::string_view name);
std::string_view to_string(MatchMode mode);

// Documents containing every term (kAll) or at least one (kAny). An empty
// term list yields no documents in either mode.
std::vector<std::string> keyword_retrieve(const std::vector<std::string>& terms, const InvertedIndex& index,
                                          MatchMode mode = MatchMode::kAll);

}  // namespace medaide::retrieval
