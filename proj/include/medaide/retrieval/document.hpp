#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "medaide/common/vector.hpp"

namespace medaide::retrieval {

struct CorpusDocument {
  std::string id;
  std::string title;
  std::string body;
  std::vector<std::string> tags;
  std::string store;
  std::optional<EmbeddingVector> vector;

  // Title and body, the text both channels look at.
  std::string text() const;
};

// JSONL {"id","title","body","tags"}. Throws Format (with line numbers) for
// schema violations and DuplicateId naming the id and line.
std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path, const std::string& store);

class Stopwords {
 public:
  Stopwords() = default;
  explicit Stopwords(std::vector<std::string> words);

  bool contains(std::string_view word) const { return words_.count(std::string(word)) > 0; }
  std::size_t size() const { return words_.size(); }

  // Plain text, one word per line, `#` comments.
  static Stopwords load(const std::filesystem::path& path);

 private:
  std::unordered_set<std::string> words_;
};

// Unique lowercased words of `text` minus stopwords, sorted.
std::vector<std::string> index_terms(std::string_view text, const Stopwords& stopwords);

}  // namespace medaide::retrieval
