#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "medaide/coordinator/plan.hpp"
#include "medaide/coordinator/profile.hpp"
#include "medaide/coordinator/templates.hpp"
#include "medaide/coordinator/trace.hpp"
#include "medaide/gateway/chat.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/retrieval/retrieve.hpp"
#include "medaide/standardizer/elements.hpp"

namespace medaide::coordinator {

// Agent id used for integrate/synthesize events that run locally.
inline constexpr std::string_view kLocalAgent = "coordinator";

struct StoreContext {
  std::string store;
  retrieval::RetrievalResult result;
  std::string rendered;  // top-k documents as prompt text
};

struct StageOutput {
  std::string stage;
  std::string title;
  std::string main_contact;
  std::string initial;
  std::vector<std::pair<std::string, std::string>> contributions;  // agent-id order
  std::string integrated;
  std::vector<std::uint64_t> trace_seqs;
};

struct StageInput {
  std::string query;
  std::string elements;
  std::string profile;
  std::vector<StageOutput> prior_outputs;  // execution order
  std::vector<StoreContext> retrieved;
};

struct KnowledgeBase {
  std::map<std::string, std::shared_ptr<const retrieval::DocumentStore>, std::less<>> stores;
  const gateway::Embedder* embedder = nullptr;  // semantic channel, optional
  double tau = 0.35;
  retrieval::MatchMode mode = retrieval::MatchMode::kAll;
  std::size_t top_k = 3;
};

struct ProtocolOptions {
  // Off: integrate and synthesize become plain concatenation.
  bool decision_analysis = true;
  // Off: only the final synthesis is a concatenation.
  bool model_synthesis = true;
};

std::string render_elements(const standardizer::ClinicalElementSet& elements);
std::string render_prior_outputs(const std::vector<StageOutput>& outputs);
std::string render_contributions(const std::vector<std::pair<std::string, std::string>>& contributions);

// Hybrid retrieval per attached store over the query plus element surfaces.
// A store named "medications" also runs an any-term keyword lookup on the
// profile's allergy list and folds those hits into the keyword channel.
std::vector<StoreContext> stage_knowledge(const StageSpec& stage, std::string_view query,
                                          const standardizer::ClinicalElementSet& elements,
                                          const PatientProfile* profile, const KnowledgeBase& kb);

std::string concat_integrate(const std::string& initial,
                             const std::vector<std::pair<std::string, std::string>>& contributions);
std::string concat_synthesis(const std::vector<StageOutput>& outputs);

// mc-call, one supporter-call per other agent (each carrying the initial
// output verbatim), integrate. Gateway errors propagate after the events
// already made are in the trace.
StageOutput run_stage(const StageSpec& stage, const StagePlan& plan, const StageInput& input,
                      const TemplateSet& templates, const gateway::Gateway& gateway, TraceLog& trace,
                      std::string_view session, const ProtocolOptions& options = {});

// One call over every executed stage output, in order.
std::string synthesize(const std::vector<StageOutput>& outputs, std::string_view query, std::string_view profile,
                       const TemplateSet& templates, const gateway::Gateway& gateway, TraceLog& trace,
                       std::string_view session, const ProtocolOptions& options = {});

}  // namespace medaide::coordinator
