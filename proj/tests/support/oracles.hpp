#pragma once

// Brute-force reference implementations. None of them calls into the code
// under test beyond plain data types.

#include <set>
#include <string>
#include <vector>

#include "medaide/grammar/grammar.hpp"
#include "medaide/grammar/parser.hpp"

namespace medaide::oracle {

struct IpmResult {
  std::vector<double> similarities;
  std::vector<double> probabilities;
  std::vector<std::size_t> activated;  // ascending indices
};

// Cosine per prototype, plain exp/sum softmax, strict threshold with the
// argmax (lowest index) fallback. Accumulates in long double.
IpmResult ipm(const std::vector<double>& query, const std::vector<std::vector<double>>& prototypes, double threshold);

struct RetrievalDoc {
  std::string id;
  std::vector<std::string> words;  // already lowercased
  std::vector<double> vector;      // empty: no embedding
};

// Keyword filter: query terms minus stopwords must all (or any) occur among
// the document's words. Semantic filter: cosine strictly above tau.
std::set<std::string> keyword_filter(const std::vector<RetrievalDoc>& docs, const std::vector<std::string>& query_words,
                                     const std::set<std::string>& stopwords, bool all_terms);
std::set<std::string> semantic_filter(const std::vector<RetrievalDoc>& docs, const std::vector<double>& query_vec,
                                      double tau);

// Every derivation of the whole sentence from the start symbol, each written
// as its preorder list of (production, split) choices. Splits are stored as
// sentence length minus split point so that the lexicographic minimum picks
// the lowest production first and then the longest left constituent.
struct ChartOracle {
  bool accepted = false;
  std::size_t derivations = 0;
  std::vector<int> preferred;  // empty when not accepted
};

ChartOracle enumerate_derivations(const std::vector<std::string>& classes, const grammar::Grammar& grammar,
                                  std::size_t cap = 1000000);

// The same encoding read off a parse tree.
std::vector<int> encode_tree(const grammar::ParseTree& tree, std::size_t sentence_length);

}  // namespace medaide::oracle
