#include "medaide/retrieval/document.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::retrieval {

std::string CorpusDocument::text() const { return title.empty() ? body : title + "\n" + body; }

std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path, const std::string& store) {
  std::vector<CorpusDocument> docs;
  std::map<std::string, std::size_t> seen;
  const std::string where = path.string();
  for (const auto& rec : io::read_jsonl(path)) {
    CorpusDocument d;
    d.id = io::require_string(rec, "id", where);
    d.title = io::optional_string(rec, "title");
    d.body = io::require_string(rec, "body", where);
    d.store = store;
    const auto at = where + ":" + std::to_string(rec.line);
    if (d.id.empty()) throw Error(ErrorCode::kFormat, at + ": empty id");
    if (text::trim(d.body).empty()) throw Error(ErrorCode::kFormat, at + ": empty body for '" + d.id + "'");
    if (const auto tags = rec.value.find("tags"); tags != rec.value.end()) {
      if (!tags->is_array()) throw Error(ErrorCode::kFormat, at + ": 'tags' must be a list");
      for (const auto& t : *tags) {
        if (!t.is_string()) throw Error(ErrorCode::kFormat, at + ": tags must be strings");
        d.tags.push_back(t.get<std::string>());
      }
    }
    if (const auto [it, fresh] = seen.emplace(d.id, rec.line); !fresh) {
      throw Error(ErrorCode::kDuplicateId, "'" + d.id + "' at " + at + " (first at line " +
                                               std::to_string(it->second) + ")");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

Stopwords::Stopwords(std::vector<std::string> words) {
  for (auto& w : words) words_.insert(text::lower(w));
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = text::trim(line);
    if (!w.empty()) words.push_back(std::move(w));
  }
  return Stopwords(std::move(words));
}

std::vector<std::string> index_terms(std::string_view text_in, const Stopwords& stopwords) {
  auto terms = text::words(text_in);
  std::erase_if(terms, [&](const std::string& t) { return stopwords.contains(t); });
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

}  // namespace medaide::retrieval
