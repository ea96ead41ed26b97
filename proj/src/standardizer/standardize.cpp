#include "medaide/standardizer/standardize.hpp"

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"

namespace medaide::standardizer {

StandardizedQuery standardize(const std::string& query, const RuleSet& rules, const gateway::Gateway* gateway,
                              int max_sweeps) {
  if (max_sweeps < 1) throw Error(ErrorCode::kInvalidArgument, "max_sweeps must be at least 1");
  StandardizedQuery out;
  out.text = query;
  while (out.sweeps < max_sweeps) {
    ++out.sweeps;
    bool changed = false;
    for (const auto& rule : rules.rules) {
      if (!is_text_rule(rule.kind)) continue;
      std::string next = run_text_rule(rule, out.text, gateway);
      if (next != out.text) {
        out.provenance.push_back({rule.id, short_hash(out.text), short_hash(next)});
        out.text = std::move(next);
        changed = true;
      }
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  return out;
}

std::string apply_pass(const std::string& text, const RuleSet& rules, const gateway::Gateway* gateway) {
  std::string cur = text;
  for (const auto& rule : rules.rules) {
    if (is_text_rule(rule.kind)) cur = run_text_rule(rule, cur, gateway);
  }
  return cur;
}

StandardizedQuery passthrough(const std::string& query) {
  StandardizedQuery out;
  out.text = query;
  out.sweeps = 0;
  out.converged = true;
  return out;
}

}  // namespace medaide::standardizer
