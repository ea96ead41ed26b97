#include "medaide/grammar/tokenizer.hpp"

#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::grammar {

void Lexicon::add(std::string_view surface, std::string cls) {
  classes_.insert_or_assign(text::lower(surface), std::move(cls));
}

const std::string& Lexicon::lookup(std::string_view lowered) const {
  const auto it = classes_.find(std::string(lowered));
  return it == classes_.end() ? unknown_ : it->second;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  Lexicon lex;
  for (const auto& rec : io::read_jsonl(path)) {
    lex.add(io::require_string(rec, "surface", path.string()), io::require_string(rec, "class", path.string()));
  }
  return lex;
}

std::string TokenSequence::reconstruct() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += separators[i];
    out += tokens[i].surface;
  }
  if (!separators.empty()) out += separators.back();
  return out;
}

TokenSequence tokenize(std::string_view source, const Lexicon& lexicon) {
  TokenSequence seq;
  std::size_t cursor = 0;
  for (const auto& piece : text::scan(source)) {
    seq.separators.emplace_back(source.substr(cursor, piece.begin - cursor));
    Token t;
    t.surface = std::string(source.substr(piece.begin, piece.end - piece.begin));
    t.text = text::lower(t.surface);
    t.cls = lexicon.lookup(t.text);
    t.begin = piece.begin;
    t.end = piece.end;
    seq.tokens.push_back(std::move(t));
    cursor = piece.end;
  }
  seq.separators.emplace_back(source.substr(cursor));
  return seq;
}

}  // namespace medaide::grammar
