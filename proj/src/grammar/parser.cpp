#include "medaide/grammar/parser.hpp"

#include <functional>

namespace medaide::grammar {
namespace {

class Chart {
 public:
  Chart(const TokenSequence& tokens, const Grammar& grammar)
      : g_(grammar), n_(tokens.size()), width_(grammar.symbol_count()), cells_(n_ * (n_ + 1) * width_, 0) {
    unary_by_child_.resize(width_);
    for (std::size_t p = 0; p < g_.productions().size(); ++p) {
      const auto& prod = g_.productions()[p];
      if (prod.rhs.size() == 1) {
        unary_by_child_[prod.rhs[0]].push_back(prod.lhs);
      } else {
        binary_.push_back(p);
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (const auto t = g_.find(tokens[i].cls); t && g_.is_terminal(*t)) add(i, i + 1, *t);
    }
    for (std::size_t len = 2; len <= n_; ++len) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        const std::size_t j = i + len;
        for (const auto p : binary_) {
          const auto& prod = g_.productions()[p];
          if (has(i, j, prod.lhs)) continue;
          for (std::size_t k = i + 1; k < j; ++k) {
            if (has(i, k, prod.rhs[0]) && has(k, j, prod.rhs[1])) {
              add(i, j, prod.lhs);
              break;
            }
          }
        }
      }
    }
  }

  bool has(std::size_t i, std::size_t j, SymbolId s) const { return cells_[index(i, j) + s] != 0; }
  std::size_t size() const { return n_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return (i * (n_ + 1) + j) * width_; }

  void add(std::size_t i, std::size_t j, SymbolId s) {
    std::vector<SymbolId> work{s};
    while (!work.empty()) {
      const auto x = work.back();
      work.pop_back();
      auto& cell = cells_[index(i, j) + x];
      if (cell) continue;
      cell = 1;
      for (const auto parent : unary_by_child_[x]) work.push_back(parent);
    }
  }

  const Grammar& g_;
  std::size_t n_;
  std::size_t width_;
  std::vector<char> cells_;
  std::vector<std::vector<SymbolId>> unary_by_child_;
  std::vector<std::size_t> binary_;
};

class TreeBuilder {
 public:
  TreeBuilder(const Chart& chart, const Grammar& grammar) : chart_(chart), g_(grammar) {}

  ParseTree build(SymbolId root) {
    ParseTree tree;
    emit(tree, root, 0, chart_.size());
    return tree;
  }

 private:
  std::size_t emit(ParseTree& tree, SymbolId sym, std::size_t i, std::size_t j) {
    const std::size_t at = tree.nodes.size();
    tree.nodes.push_back({});
    tree.nodes[at].symbol = sym;
    tree.nodes[at].begin = i;
    tree.nodes[at].end = j;
    if (g_.is_terminal(sym)) {
      tree.nodes[at].token = i;
      return at;
    }
    const auto& prods = g_.productions();
    for (std::size_t p = 0; p < prods.size(); ++p) {
      const auto& prod = prods[p];
      if (prod.lhs != sym) continue;
      if (prod.rhs.size() == 1) {
        if (!chart_.has(i, j, prod.rhs[0])) continue;
        tree.nodes[at].production = static_cast<int>(p);
        const auto child = emit(tree, prod.rhs[0], i, j);
        tree.nodes[at].children.push_back(child);
        return at;
      }
      for (std::size_t k = j - 1; k > i; --k) {
        if (chart_.has(i, k, prod.rhs[0]) && chart_.has(k, j, prod.rhs[1])) {
          tree.nodes[at].production = static_cast<int>(p);
          const auto left = emit(tree, prod.rhs[0], i, k);
          tree.nodes[at].children.push_back(left);
          const auto right = emit(tree, prod.rhs[1], k, j);
          tree.nodes[at].children.push_back(right);
          return at;
        }
      }
    }
    throw Error(ErrorCode::kInvalidArgument, "chart inconsistency at " + g_.name(sym));
  }

  const Chart& chart_;
  const Grammar& g_;
};

std::vector<Constituent> greedy_cover(const Chart& chart, const Grammar& grammar, const TokenSequence& tokens) {
  std::vector<Constituent> cover;
  std::size_t i = 0;
  const std::size_t n = chart.size();
  while (i < n) {
    bool found = false;
    for (std::size_t j = n; j > i && !found; --j) {
      for (SymbolId s = 0; s < grammar.symbol_count(); ++s) {
        if (!grammar.is_terminal(s) && chart.has(i, j, s)) {
          cover.push_back({grammar.name(s), i, j});
          i = j;
          found = true;
          break;
        }
      }
    }
    if (!found) {
      cover.push_back({tokens[i].cls, i, i + 1});
      ++i;
    }
  }
  return cover;
}

}  // namespace

std::vector<std::size_t> ParseTree::yield() const {
  std::vector<std::size_t> out;
  std::function<void(std::size_t)> walk = [&](std::size_t at) {
    const auto& node = nodes[at];
    if (node.leaf()) {
      out.push_back(node.token);
      return;
    }
    for (const auto c : node.children) walk(c);
  };
  if (!nodes.empty()) walk(0);
  return out;
}

std::string ParseTree::bracketed(const Grammar& grammar, const TokenSequence& tokens) const {
  std::function<std::string(std::size_t)> render = [&](std::size_t at) -> std::string {
    const auto& node = nodes[at];
    if (node.leaf()) return tokens[node.token].text;
    std::string s = "(" + grammar.name(node.symbol);
    for (const auto c : node.children) s += " " + render(c);
    return s + ")";
  };
  return nodes.empty() ? std::string() : render(0);
}

NoParseError::NoParseError(std::vector<Constituent> cover)
    : Error(ErrorCode::kNoParse, [&cover] {
        std::string s = "no complete derivation; cover:";
        for (const auto& c : cover) {
          s += " " + c.symbol + "[" + std::to_string(c.begin) + "," + std::to_string(c.end) + ")";
        }
        return s;
      }()),
      cover_(std::move(cover)) {}

ParseTree parse(const TokenSequence& tokens, const Grammar& grammar) {
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot parse an empty token sequence");
  const Chart chart(tokens, grammar);
  if (!chart.has(0, tokens.size(), grammar.start())) throw NoParseError(greedy_cover(chart, grammar, tokens));
  return TreeBuilder(chart, grammar).build(grammar.start());
}

bool accepts(const TokenSequence& tokens, const Grammar& grammar) {
  if (tokens.empty()) return false;
  return Chart(tokens, grammar).has(0, tokens.size(), grammar.start());
}

}  // namespace medaide::grammar
