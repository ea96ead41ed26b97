#include "medaide/standardizer/refine.hpp"

#include <algorithm>

#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"
#include "medaide/retrieval/soft_f1.hpp"

namespace medaide::standardizer {
namespace {

std::string clause_text(std::string_view source, const grammar::TokenSequence& tokens, const ClauseSpan& c) {
  const auto begin = tokens[c.begin].begin;
  const auto end = tokens[c.end - 1].end;
  return std::string(source.substr(begin, end - begin));
}

std::string enrich_prompt_system(const std::vector<ContextDoc>& context, const retrieval::DocumentStore* guidelines) {
  std::string s =
      "Rewrite the clause as one self-contained medical question. Keep every clinical detail. "
      "Answer with the question only.";
  if (guidelines && !context.empty()) {
    s += "\nRelevant guidelines:";
    for (const auto& c : context) {
      if (const auto* d = guidelines->find(c.id)) s += "\n- " + d->title;
    }
  }
  return s;
}

bool same(const std::vector<Subquery>& a, const std::vector<Subquery>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].text != b[i].text || a[i].hint != b[i].hint) return false;
  }
  return true;
}

}  // namespace

std::vector<ContextDoc> assemble_context(const ClinicalElementSet& elements, const retrieval::DocumentStore& guidelines,
                                         const gateway::Embedder* retrieval_embedder,
                                         const gateway::Embedder& token_embedder, double tau, std::size_t k) {
  if (guidelines.documents().empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "store '" + guidelines.id() + "' has no documents");
  }
  if (elements.empty()) return {};
  const std::string query = elements.joined();
  std::optional<EmbeddingVector> qv;
  if (retrieval_embedder && guidelines.embedded_count() > 0) qv = retrieval_embedder->embed(query);
  const auto result = guidelines.retrieve(query, qv ? &*qv : nullptr, tau, retrieval::MatchMode::kAny);
  std::vector<ContextDoc> ranked;
  for (const auto& id : result.final_ids) {
    const auto* doc = guidelines.find(id);
    ranked.push_back({id, retrieval::soft_f1(doc->text(), query, token_embedder)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const ContextDoc& a, const ContextDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

RefinedQuery construct_refined(const StandardizedQuery& std_query, const grammar::TokenSequence& tokens,
                               const std::vector<ClauseSpan>& clauses, const std::vector<ContextDoc>& context,
                               const retrieval::DocumentStore* guidelines, const RuleSet& rules,
                               const gateway::Gateway* gateway, const ConstructOptions& options) {
  if (options.max_sweeps < 1) throw Error(ErrorCode::kInvalidArgument, "max_sweeps must be at least 1");
  RefinedQuery out;
  std::vector<Subquery> items;
  for (const auto& c : clauses) {
    std::string t = clause_text(std_query.text, tokens, c);
    if (options.enrich && gateway) t = gateway->ask(enrich_prompt_system(context, guidelines), t).content;
    items.push_back({std::move(t), std::nullopt});
  }
  out.converged = false;
  while (out.sweeps < options.max_sweeps) {
    ++out.sweeps;
    const auto before = items;
    for (const auto& rule : rules.rules) {
      if (is_text_rule(rule.kind)) {
        for (auto& s : items) s.text = run_text_rule(rule, s.text, gateway);
      } else {
        items = run_list_rule(rule, items, gateway);
      }
    }
    if (same(before, items)) {
      out.converged = true;
      break;
    }
  }
  std::vector<Subquery> kept;
  for (auto& s : items) {
    if (text::trim(s.text).empty()) continue;
    const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const Subquery& k) {
      return overlap_ratio(k.text, s.text) > options.overlap_threshold;
    });
    if (!redundant) kept.push_back(std::move(s));
  }
  if (kept.empty() && !text::trim(std_query.text).empty()) kept.push_back({std_query.text, std::nullopt});
  std::stable_sort(kept.begin(), kept.end(), [](const Subquery& a, const Subquery& b) {
    const int ra = a.hint ? static_cast<int>(*a.hint) : 4;
    const int rb = b.hint ? static_cast<int>(*b.hint) : 4;
    return ra < rb;
  });
  std::vector<std::string> texts;
  for (const auto& s : kept) texts.push_back(s.text);
  out.merged_text = text::join(texts, "; ");
  out.subqueries = std::move(kept);
  return out;
}

}  // namespace medaide::standardizer
