#pragma once

#include <string>
#include <vector>

#include "medaide/gateway/chat.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/retrieval/retrieve.hpp"
#include "medaide/standardizer/elements.hpp"
#include "medaide/standardizer/rules.hpp"
#include "medaide/standardizer/standardize.hpp"

namespace medaide::standardizer {

struct ContextDoc {
  std::string id;
  double score = 0.0;
};

// Hybrid retrieval (any-term keyword channel) over the joined element
// surfaces, re-ranked by soft F1 of document text against that string.
// Empty elements give an empty list; an empty store raises EmptyCorpus.
// `retrieval_embedder` may be null, which disables the semantic channel.
std::vector<ContextDoc> assemble_context(const ClinicalElementSet& elements, const retrieval::DocumentStore& guidelines,
                                         const gateway::Embedder* retrieval_embedder,
                                         const gateway::Embedder& token_embedder, double tau, std::size_t k = 3);

struct RefinedQuery {
  std::vector<Subquery> subqueries;
  std::string merged_text;
  int sweeps = 0;
  bool converged = true;
};

struct ConstructOptions {
  double overlap_threshold = 0.6;
  int max_sweeps = kDefaultMaxSweeps;
  // Ask the gateway to rewrite each clause into a standalone subquery.
  bool enrich = false;
};

// Clause texts (optionally rewritten by the gateway) run through the whole
// rule set to a fixed point: text rules on each subquery, list rules on the
// list. Later subqueries overlapping an earlier one above the threshold are
// dropped at the end whatever the rules did. If nothing survives, the
// standardized text stands alone. merged_text joins survivors with "; ".
RefinedQuery construct_refined(const StandardizedQuery& std_query, const grammar::TokenSequence& tokens,
                               const std::vector<ClauseSpan>& clauses, const std::vector<ContextDoc>& context,
                               const retrieval::DocumentStore* guidelines, const RuleSet& rules,
                               const gateway::Gateway* gateway, const ConstructOptions& options = {});

}  // namespace medaide::standardizer
