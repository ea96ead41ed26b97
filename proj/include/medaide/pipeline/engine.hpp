#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "medaide/coordinator/plan.hpp"
#include "medaide/coordinator/profile.hpp"
#include "medaide/coordinator/protocol.hpp"
#include "medaide/coordinator/templates.hpp"
#include "medaide/coordinator/trace.hpp"
#include "medaide/gateway/chat.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/grammar/grammar.hpp"
#include "medaide/grammar/parser.hpp"
#include "medaide/grammar/tokenizer.hpp"
#include "medaide/intent/matcher.hpp"
#include "medaide/intent/prototypes.hpp"
#include "medaide/pipeline/config.hpp"
#include "medaide/retrieval/retrieve.hpp"
#include "medaide/standardizer/elements.hpp"
#include "medaide/standardizer/refine.hpp"
#include "medaide/standardizer/standardize.hpp"

namespace medaide::pipeline {

struct RunContext {
  std::optional<coordinator::PatientProfile> profile;
  // Previous turn's query vector for smoothing; ignored when lambda is 0.
  const EmbeddingVector* previous_query = nullptr;
  // Mixed into the session id, e.g. the turn number of a chat.
  std::string salt;
};

struct RunResult {
  std::string session_id;
  standardizer::StandardizedQuery standardized;
  grammar::TokenSequence tokens;
  bool parsed = false;
  std::string tree;  // bracketed, empty without a parse
  std::vector<grammar::Constituent> cover;
  std::vector<standardizer::ClauseSpan> clauses;
  standardizer::ClinicalElementSet elements;
  std::vector<standardizer::ContextDoc> context;
  standardizer::RefinedQuery refined;
  intent::IntentActivation activation;
  EmbeddingVector query_vector;  // empty for the prompt recognizer
  std::vector<std::string> planned_stages;
  std::vector<coordinator::StageOutput> outputs;
  std::string final_text;
  std::vector<coordinator::TraceEvent> trace;
  std::string trace_hash;
};

// Chat backend stack for a config: mock, replay cassette or HTTP, with an
// optional recording cassette and the parallelism cap on top.
std::shared_ptr<gateway::ChatBackend> make_chat_backend(const EngineConfig& config);
std::unique_ptr<gateway::Embedder> make_embedder(const EngineConfig& config, const std::string& kind,
                                                 const gateway::EmbeddingTable* table);

// Loads every resource named by the config once; run() is safe to call from
// several threads.
class Engine {
 public:
  explicit Engine(EngineConfig config);

  RunResult run(const std::string& query, const RunContext& context = {}) const;

  const EngineConfig& config() const { return config_; }
  const intent::IntentTaxonomy& taxonomy() const { return taxonomy_; }
  const coordinator::StagePlan& plan() const { return plan_; }
  const grammar::Grammar& grammar() const { return grammar_; }
  const std::map<std::string, std::shared_ptr<const retrieval::DocumentStore>, std::less<>>& stores() const {
    return kb_.stores;
  }
  coordinator::TraceLog& trace() const { return *trace_; }
  coordinator::ProfileStore& profiles() const { return *profiles_; }
  const gateway::Gateway& gateway() const { return *gateway_; }
  const gateway::Embedder& token_embedder() const { return *token_embedder_; }

 private:
  EngineConfig config_;
  grammar::Grammar grammar_;
  grammar::Lexicon token_lexicon_;
  standardizer::ElementLexicon element_lexicon_;
  standardizer::RuleSet standardize_rules_;
  standardizer::RuleSet refine_rules_;
  intent::IntentTaxonomy taxonomy_;
  std::optional<gateway::EmbeddingTable> table_;
  std::unique_ptr<gateway::Embedder> intent_embedder_;
  std::unique_ptr<gateway::Embedder> retrieval_embedder_;
  std::unique_ptr<gateway::Embedder> token_embedder_;
  std::optional<intent::PrototypeStore> prototypes_;
  coordinator::StagePlan plan_;
  std::optional<coordinator::TemplateSet> templates_;
  coordinator::KnowledgeBase kb_;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<coordinator::TraceLog> trace_;
  std::unique_ptr<coordinator::ProfileStore> profiles_;
};

// Ingested copy of a store if present, else the configured corpus file.
std::filesystem::path corpus_path(const EngineConfig& config, const std::string& store_id);

}  // namespace medaide::pipeline
