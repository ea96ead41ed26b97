#include "medaide/standardizer/elements.hpp"

#include <algorithm>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::standardizer {
namespace {

constexpr std::pair<ElementKind, std::string_view> kKindNames[] = {
    {ElementKind::kSymptom, "symptom"},       {ElementKind::kCondition, "condition"},
    {ElementKind::kHistory, "history"},       {ElementKind::kMedication, "medication"},
    {ElementKind::kDemographic, "demographic"}, {ElementKind::kOther, "other"},
};

bool is_split_class(const std::string& cls) { return cls == "CONJ" || cls == "PUNCT"; }

bool is_split_punct(const std::string& surface) {
  return surface == ";" || surface == "," || surface == "." || surface == "?" || surface == "!";
}

std::vector<ClauseSpan> spans_between(const std::vector<bool>& split, std::size_t n) {
  std::vector<ClauseSpan> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i == n || split[i]) {
      if (i > begin) out.push_back({begin, i});
      begin = i + 1;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ElementKind kind) {
  for (const auto& [k, n] : kKindNames) {
    if (k == kind) return n;
  }
  return "other";
}

ElementKind parse_element_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kFormat, "unknown element kind '" + std::string(name) + "'");
}

std::vector<ClauseSpan> segment_clauses(const grammar::ParseTree* tree, const grammar::Grammar* grammar,
                                        const grammar::TokenSequence& tokens) {
  const std::size_t n = tokens.size();
  std::vector<bool> split(n, false);
  if (tree && grammar) {
    for (const auto& node : tree->nodes) {
      if (node.leaf() || node.children.empty()) continue;
      const auto& first = tree->nodes[node.children.front()];
      if (first.leaf() && is_split_class(grammar->name(first.symbol))) split[first.token] = true;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      split[i] = is_split_class(tokens[i].cls) || is_split_punct(tokens[i].surface);
    }
  }
  return spans_between(split, n);
}

std::string ClinicalElementSet::joined() const {
  std::vector<std::string> parts;
  for (const auto& e : elements) parts.push_back(e.surface);
  return text::join(parts, " ");
}

void ElementLexicon::add(std::string_view surface, ElementKind kind) {
  const auto seq = grammar::tokenize(surface, grammar::Lexicon{});
  Term t;
  for (const auto& tok : seq.tokens) t.tokens.push_back(tok.text);
  if (t.tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "empty lexicon surface");
  t.kind = kind;
  terms_.push_back(std::move(t));
}

ElementLexicon ElementLexicon::load(const std::filesystem::path& path) {
  ElementLexicon lex;
  for (const auto& rec : io::read_jsonl(path)) {
    const auto surface = io::require_string(rec, "surface", path.string());
    const auto kind = io::require_string(rec, "kind", path.string());
    try {
      lex.add(surface, parse_element_kind(kind));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(rec.line) + ": " + e.detail());
    }
  }
  return lex;
}

ClinicalElementSet extract_elements(std::string_view std_text, const grammar::TokenSequence& tokens,
                                    const std::vector<ClauseSpan>& clauses, const ElementLexicon& lexicon) {
  struct Hit {
    std::size_t begin, end;
    ElementKind kind;
  };
  std::vector<Hit> chosen;
  for (const auto& clause : clauses) {
    std::vector<Hit> hits;
    for (std::size_t i = clause.begin; i < clause.end; ++i) {
      for (const auto& term : lexicon.terms()) {
        const std::size_t len = term.tokens.size();
        if (i + len > clause.end) continue;
        bool ok = true;
        for (std::size_t k = 0; k < len && ok; ++k) ok = tokens[i + k].text == term.tokens[k];
        if (ok) hits.push_back({i, i + len, term.kind});
      }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
      if (a.end - a.begin != b.end - b.begin) return a.end - a.begin > b.end - b.begin;
      return a.begin < b.begin;
    });
    for (const auto& h : hits) {
      const bool clash = std::any_of(chosen.begin(), chosen.end(),
                                     [&](const Hit& c) { return h.begin < c.end && c.begin < h.end; });
      if (!clash) chosen.push_back(h);
    }
  }
  std::sort(chosen.begin(), chosen.end(), [](const Hit& a, const Hit& b) { return a.begin < b.begin; });
  ClinicalElementSet out;
  for (const auto& h : chosen) {
    ClinicalElement e;
    e.kind = h.kind;
    e.begin = tokens[h.begin].begin;
    e.end = tokens[h.end - 1].end;
    e.surface = std::string(std_text.substr(e.begin, e.end - e.begin));
    out.elements.push_back(std::move(e));
  }
  return out;
}

}  // namespace medaide::standardizer
