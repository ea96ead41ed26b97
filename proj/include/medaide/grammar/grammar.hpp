#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medaide::grammar {

using SymbolId = std::uint32_t;

struct RawProduction {
  std::string lhs;
  std::vector<std::string> rhs;  // length >= 1
};

// As written in a grammar file. Symbols that appear on some left-hand side
// are nonterminals; everything else is a terminal (token class).
struct RawGrammar {
  std::vector<RawProduction> productions;
  std::string start;
};

// `LHS -> A B | C` per line, `#` comments, continuation lines may start with
// `|`. The first LHS is the start symbol.
RawGrammar parse_grammar_text(std::string_view source);
RawGrammar load_grammar_file(const std::filesystem::path& path);

struct Production {
  SymbolId lhs = 0;
  std::vector<SymbolId> rhs;  // one or two symbols
};

// Normal form: every right-hand side has one or two symbols and unit chains
// are acyclic. Immutable once built.
class Grammar {
 public:
  const std::string& name(SymbolId id) const { return names_[id]; }
  bool is_terminal(SymbolId id) const { return terminal_[id]; }
  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId start() const { return start_; }
  std::size_t symbol_count() const { return names_.size(); }
  const std::vector<Production>& productions() const { return productions_; }

  std::vector<std::string> nonterminal_names() const;
  std::vector<std::string> terminal_names() const;

  // One production per line, `A -> B C`, in index order.
  std::string to_text() const;

 private:
  friend Grammar normalize_grammar(const RawGrammar& raw);

  std::vector<std::string> names_;
  std::vector<bool> terminal_;
  std::unordered_map<std::string, SymbolId> ids_;
  std::vector<Production> productions_;
  SymbolId start_ = 0;
};

// Splits right-hand sides longer than two via fresh primed nonterminals
// (S -> A B C becomes S -> A S', S' -> B C) placed right after the
// production they came from. Throws CyclicUnitChain.
Grammar normalize_grammar(const RawGrammar& raw);

}  // namespace medaide::grammar
