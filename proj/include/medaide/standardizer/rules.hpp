#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/common/stage.hpp"
#include "medaide/gateway/chat.hpp"

namespace medaide::standardizer {

enum class RuleKind {
  kSubqueryFilter,
  kOverlapRemoval,
  kConsolidation,
  kGrammaticalNormalization,
  kIntentPrioritization,
  kFormatStandardization,
};

enum class RuleMode { kDeterministic, kModelBacked };

std::string_view to_string(RuleKind kind);
RuleKind parse_rule_kind(std::string_view name);
std::string_view to_string(RuleMode mode);
RuleMode parse_rule_mode(std::string_view name);

// Text rules rewrite one string; list rules rewrite the subquery list.
bool is_text_rule(RuleKind kind);

enum class FormatOp { kTrim, kCollapseWhitespace, kStripTrailingPunctuation, kLowercase };

struct Subquery {
  std::string text;
  std::optional<CareStage> hint;
};

struct RewriteRule {
  std::string id;
  RuleKind kind = RuleKind::kFormatStandardization;
  RuleMode mode = RuleMode::kDeterministic;
  // Model-backed rules send this to the gateway; the deterministic payload
  // below is their offline fallback.
  std::string instruction;

  // grammatical-normalization
  std::string pattern;
  std::string replacement;
  std::optional<std::regex> regex;
  // format-standardization
  std::vector<FormatOp> ops;
  // subquery-filter (regex drop plus a token floor) and consolidation
  std::size_t min_tokens = 0;
  // overlap-removal
  double threshold = 0.6;
  // intent-prioritization
  std::map<CareStage, std::vector<std::string>> cues;
};

// Ordered, ids unique.
struct RuleSet {
  std::vector<RewriteRule> rules;

  bool empty() const { return rules.empty(); }
};

// JSONL, one rule per line:
//   {"id","kind","mode","pattern","template", ...kind-specific fields}
// grammatical-normalization: pattern = regex, template = replacement ($1 etc),
//   optional "flags":"i".
// format-standardization: pattern = list of ops (trim, collapse-whitespace,
//   strip-trailing-punctuation, lowercase).
// subquery-filter: optional pattern = regex of subqueries to drop,
//   "min_tokens" = drop subqueries with fewer words.
// overlap-removal: "threshold" (default 0.6).
// consolidation: "min_tokens" = fragments shorter than this join their
//   predecessor.
// intent-prioritization: "cues" = {stage: [words]}.
// Model-backed rules also carry "instruction".
RuleSet load_rules(const std::filesystem::path& path);
RuleSet parse_rules(const std::vector<gateway::Json>& records);
RewriteRule parse_rule(const gateway::Json& record);

// Jaccard overlap of the two word sets; 0 when both are empty.
double overlap_ratio(std::string_view a, std::string_view b);

// Deterministic behaviour of a text rule.
std::string apply_text_rule(const RewriteRule& rule, const std::string& text);
// Deterministic behaviour of a list rule.
std::vector<Subquery> apply_list_rule(const RewriteRule& rule, const std::vector<Subquery>& items);

// Dispatches to the gateway for model-backed rules when one is given.
std::string run_text_rule(const RewriteRule& rule, const std::string& text, const gateway::Gateway* gateway);
std::vector<Subquery> run_list_rule(const RewriteRule& rule, const std::vector<Subquery>& items,
                                    const gateway::Gateway* gateway);

}  // namespace medaide::standardizer
