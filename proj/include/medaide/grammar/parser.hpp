#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "medaide/common/error.hpp"
#include "medaide/grammar/grammar.hpp"
#include "medaide/grammar/tokenizer.hpp"

namespace medaide::grammar {

struct ParseNode {
  SymbolId symbol = 0;
  int production = -1;  // index into Grammar::productions(), -1 for leaves
  std::vector<std::size_t> children;
  std::size_t token = 0;  // meaningful for leaves only
  std::size_t begin = 0;  // token span [begin, end)
  std::size_t end = 0;

  bool leaf() const { return production < 0; }
};

// Nodes in preorder; nodes[0] is the root.
struct ParseTree {
  std::vector<ParseNode> nodes;

  const ParseNode& root() const { return nodes.front(); }
  std::vector<std::size_t> yield() const;
  // "(S (NP headache) (COORD and ...))" with leaves printed as token text.
  std::string bracketed(const Grammar& grammar, const TokenSequence& tokens) const;
};

struct Constituent {
  std::string symbol;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class NoParseError : public Error {
 public:
  explicit NoParseError(std::vector<Constituent> cover);
  const std::vector<Constituent>& cover() const { return cover_; }

 private:
  std::vector<Constituent> cover_;
};

// Chart parse. Among several derivations the tree is chosen top-down: the
// lowest-index production that derives the span, then the split with the
// longest left constituent, then recursively for each child. Throws
// NoParseError carrying a greedy cover of maximal derivable spans.
ParseTree parse(const TokenSequence& tokens, const Grammar& grammar);

bool accepts(const TokenSequence& tokens, const Grammar& grammar);

}  // namespace medaide::grammar
