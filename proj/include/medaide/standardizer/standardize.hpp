#pragma once

#include <string>
#include <vector>

#include "medaide/gateway/chat.hpp"
#include "medaide/standardizer/rules.hpp"

namespace medaide::standardizer {

inline constexpr int kDefaultMaxSweeps = 16;

struct ProvenanceEntry {
  std::string rule_id;
  std::string before_hash;
  std::string after_hash;
};

struct StandardizedQuery {
  std::string text;
  int sweeps = 0;
  bool converged = false;
  // One entry per rule application that changed the text, in execution order.
  std::vector<ProvenanceEntry> provenance;
};

// Full passes over the text rules in file order until a pass changes nothing
// or max_sweeps passes have run. List rules are skipped here; they act in
// construct_refined. A null gateway runs model-backed rules on their
// deterministic fallback.
StandardizedQuery standardize(const std::string& query, const RuleSet& rules, const gateway::Gateway* gateway,
                              int max_sweeps = kDefaultMaxSweeps);

// One pass, used to check the fixed point from outside.
std::string apply_pass(const std::string& text, const RuleSet& rules, const gateway::Gateway* gateway);

// The query as fed to later stages when standardization is switched off.
StandardizedQuery passthrough(const std::string& query);

}  // namespace medaide::standardizer
