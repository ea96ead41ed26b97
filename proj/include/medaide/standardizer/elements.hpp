#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/grammar/parser.hpp"
#include "medaide/grammar/tokenizer.hpp"

namespace medaide::standardizer {

enum class ElementKind { kSymptom, kCondition, kHistory, kMedication, kDemographic, kOther };

std::string_view to_string(ElementKind kind);
ElementKind parse_element_kind(std::string_view name);

// Token range [begin, end).
struct ClauseSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// With a tree, a CONJ or PUNCT leaf that opens a constituent is a split
// point. Without one (the parser gave up), every CONJ/PUNCT token and every
// `; , . ? !` splits. Split tokens belong to no clause; empty clauses vanish.
std::vector<ClauseSpan> segment_clauses(const grammar::ParseTree* tree, const grammar::Grammar* grammar,
                                        const grammar::TokenSequence& tokens);

struct ClinicalElement {
  ElementKind kind = ElementKind::kOther;
  std::string surface;
  std::size_t begin = 0;  // byte span in the standardized text
  std::size_t end = 0;
};

struct ClinicalElementSet {
  std::vector<ClinicalElement> elements;

  bool empty() const { return elements.empty(); }
  // Surfaces joined by single spaces.
  std::string joined() const;
};

// Terms stored as lowercased token sequences.
class ElementLexicon {
 public:
  struct Term {
    std::vector<std::string> tokens;
    ElementKind kind = ElementKind::kOther;
  };

  void add(std::string_view surface, ElementKind kind);
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // JSONL {"surface","kind"}.
  static ElementLexicon load(const std::filesystem::path& path);

 private:
  std::vector<Term> terms_;
};

// Lexicon hits inside each clause, chosen longest first (earlier start on
// ties) and never overlapping. Output ordered by position.
ClinicalElementSet extract_elements(std::string_view std_text, const grammar::TokenSequence& tokens,
                                    const std::vector<ClauseSpan>& clauses, const ElementLexicon& lexicon);

}  // namespace medaide::standardizer
