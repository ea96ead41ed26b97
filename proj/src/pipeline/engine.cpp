#include "medaide/pipeline/engine.hpp"

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/text.hpp"
#include "medaide/gateway/cassette.hpp"
#include "medaide/gateway/http.hpp"
#include "medaide/gateway/mock.hpp"

namespace medaide::pipeline {
namespace {

gateway::HttpEndpoint endpoint_for(const EngineConfig& c) {
  gateway::HttpEndpoint e;
  e.base_url = c.base_url;
  e.retries = c.retries;
  return e;
}

}  // namespace

std::shared_ptr<gateway::ChatBackend> make_chat_backend(const EngineConfig& c) {
  std::shared_ptr<gateway::ChatBackend> inner;
  switch (c.profile) {
    case BackendProfile::kMock:
      inner = std::make_shared<gateway::MockChatBackend>(gateway::load_mock_script(c.resolve(c.mock_script)));
      break;
    case BackendProfile::kLive:
      inner = std::make_shared<gateway::HttpChatBackend>(gateway::make_http_transport(c.timeout_seconds),
                                                         endpoint_for(c));
      break;
    case BackendProfile::kReplay:
      break;
  }
  std::string mode = c.cassette_mode;
  if (mode.empty() && c.profile == BackendProfile::kReplay) mode = "replay";
  std::shared_ptr<gateway::ChatBackend> backend = inner;
  if (!mode.empty()) {
    if (c.cassette.empty()) throw Error(ErrorCode::kConfig, "backend.cassette_mode set without a cassette");
    const auto m = gateway::parse_cassette_mode(mode);
    if (m != gateway::CassetteMode::kReplay && !inner) {
      throw Error(ErrorCode::kConfig, "cassette mode '" + mode + "' needs a mock or live backend underneath");
    }
    auto cassette = m == gateway::CassetteMode::kRecord ? gateway::Cassette::open_for_record(c.resolve(c.cassette))
                                                        : gateway::Cassette::load(c.resolve(c.cassette));
    backend = std::make_shared<gateway::CassetteChatBackend>(m, std::move(cassette), inner);
  }
  return std::make_shared<gateway::BoundedChatBackend>(backend, c.parallelism);
}

std::unique_ptr<gateway::Embedder> make_embedder(const EngineConfig& c, const std::string& kind,
                                                 const gateway::EmbeddingTable* table) {
  const auto dim = static_cast<std::size_t>(c.dimension);
  if (kind == "hash") return std::make_unique<gateway::HashEmbedder>(dim, gateway::HashMode::kWholeText, c.seed);
  if (kind == "hash-bow") return std::make_unique<gateway::HashEmbedder>(dim, gateway::HashMode::kBagOfWords, c.seed);
  if (kind == "file") {
    if (!table) throw Error(ErrorCode::kConfig, "file embedder needs paths.embedding_file");
    return std::make_unique<gateway::FileEmbedder>(*table, c.embedding_file);
  }
  if (kind == "http") {
    return std::make_unique<gateway::HttpEmbedder>(gateway::make_http_transport(c.timeout_seconds), endpoint_for(c),
                                                   c.embed_model, dim);
  }
  if (kind == "none") return nullptr;
  throw Error(ErrorCode::kConfig, "unknown embedder '" + kind + "'");
}

std::filesystem::path corpus_path(const EngineConfig& c, const std::string& store_id) {
  const auto ingested = c.resolve(c.state_dir) / "stores" / (store_id + ".jsonl");
  if (std::filesystem::exists(ingested)) return ingested;
  const auto it = c.stores.find(store_id);
  if (it == c.stores.end()) throw Error(ErrorCode::kConfig, "unknown store '" + store_id + "'");
  return c.resolve(it->second);
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto& c = config_;
  grammar_ = grammar::normalize_grammar(grammar::load_grammar_file(c.resolve(c.grammar)));
  token_lexicon_ = grammar::Lexicon::load(c.resolve(c.token_lexicon));
  element_lexicon_ = standardizer::ElementLexicon::load(c.resolve(c.element_lexicon));
  standardize_rules_ = standardizer::load_rules(c.resolve(c.standardize_rules));
  refine_rules_ = standardizer::load_rules(c.resolve(c.refine_rules));
  taxonomy_ = intent::load_taxonomy(c.resolve(c.taxonomy));
  if (!c.embedding_file.empty()) table_ = gateway::load_embedding_file(c.resolve(c.embedding_file));
  const auto* table = table_ ? &*table_ : nullptr;
  intent_embedder_ = make_embedder(c, c.intent_embedder, table);
  retrieval_embedder_ = make_embedder(c, c.retrieval_embedder, table);
  token_embedder_ = make_embedder(c, c.token_embedder, table);
  if (c.recognizer == "embedding") {
    if (c.intent_embedder == "file") {
      prototypes_ = intent::prototypes_from_table(taxonomy_, *table);
    } else {
      prototypes_ =
          intent::prototypes_from_exemplars(taxonomy_, intent::load_exemplars(c.resolve(c.exemplars)), *intent_embedder_);
    }
    if (prototypes_->dimension() != intent_embedder_->dimension()) {
      throw Error(ErrorCode::kConfig, "prototype dimension differs from the intent embedder");
    }
  }
  plan_ = coordinator::load_plan(c.plan_path(), taxonomy_);
  templates_ = coordinator::TemplateSet::load(c.resolve(c.templates), plan_);

  const auto stopwords = retrieval::Stopwords::load(c.resolve(c.stopwords));
  for (const auto& [id, _] : c.stores) {
    auto store = std::make_shared<retrieval::DocumentStore>(id, retrieval::load_corpus(corpus_path(c, id), id), stopwords);
    if (c.retrieval_embedder == "file") {
      store->attach_vectors(*table);
    } else if (retrieval_embedder_) {
      store->embed_documents(*retrieval_embedder_);
    }
    kb_.stores.emplace(id, std::move(store));
  }
  for (const auto& stage : plan_.stages) {
    for (const auto& s : stage.stores) {
      if (!kb_.stores.count(s)) {
        throw Error(ErrorCode::kConfig, "stage '" + stage.id + "' attaches store '" + s + "' missing from [stores]");
      }
    }
  }
  kb_.embedder = retrieval_embedder_.get();
  kb_.tau = c.tau;
  kb_.mode = retrieval::parse_match_mode(c.keyword_mode);
  kb_.top_k = static_cast<std::size_t>(c.top_k);

  gateway::ChatSettings settings;
  settings.model = c.model;
  settings.temperature = c.profile == BackendProfile::kLive ? c.temperature : 0.0;
  settings.max_tokens = c.max_tokens;
  gateway_ = std::make_unique<gateway::Gateway>(make_chat_backend(c), settings);
  trace_ = std::make_unique<coordinator::TraceLog>();
  profiles_ = std::make_unique<coordinator::ProfileStore>(c.resolve(c.profiles_dir));
}

RunResult Engine::run(const std::string& query, const RunContext& ctx) const {
  const auto& c = config_;
  RunResult r;
  r.session_id = short_hash(c.fingerprint().dump() + "\n" + query + "\n" + ctx.salt);
  if (text::trim(query).empty()) throw Error(ErrorCode::kEmptyInput, "query is empty");
  const bool model_mode = c.constructor == "model";
  const gateway::Gateway* rule_gateway = model_mode ? gateway_.get() : nullptr;

  if (c.no_rie) {
    r.standardized = standardizer::passthrough(query);
    r.tokens = grammar::tokenize(query, token_lexicon_);
    r.refined.subqueries.push_back({query, std::nullopt});
    r.refined.merged_text = query;
    r.refined.sweeps = 0;
  } else {
    r.standardized = standardizer::standardize(query, standardize_rules_, rule_gateway, c.max_sweeps);
    r.tokens = grammar::tokenize(r.standardized.text, token_lexicon_);
    if (r.tokens.empty()) throw Error(ErrorCode::kEmptyInput, "standardized query has no tokens");
    std::optional<grammar::ParseTree> tree;
    try {
      tree = grammar::parse(r.tokens, grammar_);
      r.parsed = true;
      r.tree = tree->bracketed(grammar_, r.tokens);
    } catch (const grammar::NoParseError& e) {
      r.cover = e.cover();
    }
    r.clauses = standardizer::segment_clauses(tree ? &*tree : nullptr, &grammar_, r.tokens);
    r.elements = standardizer::extract_elements(r.standardized.text, r.tokens, r.clauses, element_lexicon_);
    const retrieval::DocumentStore* guidelines = nullptr;
    if (const auto it = kb_.stores.find("guidelines"); it != kb_.stores.end()) {
      guidelines = it->second.get();
      r.context = standardizer::assemble_context(r.elements, *guidelines, retrieval_embedder_.get(), *token_embedder_,
                                                 c.tau, static_cast<std::size_t>(c.top_k));
    }
    standardizer::ConstructOptions opts;
    opts.overlap_threshold = c.overlap;
    opts.max_sweeps = c.max_sweeps;
    opts.enrich = model_mode;
    r.refined = standardizer::construct_refined(r.standardized, r.tokens, r.clauses, r.context, guidelines,
                                                refine_rules_, rule_gateway, opts);
  }

  if (c.recognizer == "prompt") {
    r.activation = intent::match_via_prompt(r.refined.merged_text, taxonomy_, *gateway_);
  } else {
    const auto current = intent_embedder_->embed(r.refined.merged_text);
    r.query_vector = intent::smooth(ctx.previous_query, current, c.lambda);
    r.activation = intent::match_vector(r.query_vector, *prototypes_, taxonomy_, c.intent_threshold);
  }

  r.planned_stages = coordinator::plan_stages(r.activation, plan_);
  const std::string profile_text = ctx.profile ? coordinator::render_profile(*ctx.profile) : std::string();
  coordinator::ProtocolOptions popts;
  popts.decision_analysis = !c.no_decision_analysis;
  popts.model_synthesis = c.synthesis == "model";
  const auto elements_text = coordinator::render_elements(r.elements);
  // Events go to a per-run log first so concurrent or repeated sessions never
  // interleave; the shared log receives them even when a stage fails.
  coordinator::TraceLog local;
  const auto publish = [&] {
    for (auto e : local.events()) trace_->append(std::move(e));
  };
  try {
    for (const auto& stage_id : r.planned_stages) {
      const auto& stage = *plan_.find_stage(stage_id);
      coordinator::StageInput input;
      input.query = r.refined.merged_text;
      input.elements = elements_text;
      input.profile = profile_text;
      input.prior_outputs = r.outputs;
      input.retrieved = coordinator::stage_knowledge(stage, r.refined.merged_text, r.elements,
                                                     ctx.profile ? &*ctx.profile : nullptr, kb_);
      r.outputs.push_back(
          coordinator::run_stage(stage, plan_, input, *templates_, *gateway_, local, r.session_id, popts));
    }
    r.final_text = coordinator::synthesize(r.outputs, r.refined.merged_text, profile_text, *templates_, *gateway_,
                                           local, r.session_id, popts);
  } catch (...) {
    publish();
    throw;
  }
  publish();
  r.trace = local.events();
  r.trace_hash = coordinator::trace_hash(r.trace);
  return r;
}

}  // namespace medaide::pipeline
