#include "medaide/pipeline/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>

#include "medaide/common/error.hpp"

namespace medaide::pipeline {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::kConfig, key + ": " + msg);
}

template <typename T>
void read(const pt::ptree& section, const std::string& name, const std::string& key, T& target) {
  const auto v = section.get_optional<std::string>(key);
  if (!v) return;
  if constexpr (std::is_same_v<T, std::string>) {
    target = *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (*v == "true" || *v == "1" || *v == "yes") {
      target = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      target = false;
    } else {
      bad(name + "." + key, "expected a boolean, got '" + *v + "'");
    }
  } else {
    const auto parsed = section.get_optional<T>(key);
    if (!parsed) bad(name + "." + key, "cannot parse '" + *v + "'");
    target = *parsed;
  }
}

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : section) {
    if (!allowed.count(key)) bad(name + "." + key, "unknown key");
  }
}

}  // namespace

std::string_view to_string(BackendProfile p) {
  switch (p) {
    case BackendProfile::kLive: return "live";
    case BackendProfile::kMock: return "mock";
    case BackendProfile::kReplay: return "replay";
  }
  return "?";
}

BackendProfile parse_backend_profile(std::string_view name) {
  if (name == "live") return BackendProfile::kLive;
  if (name == "mock") return BackendProfile::kMock;
  if (name == "replay") return BackendProfile::kReplay;
  throw Error(ErrorCode::kConfig, "unknown backend profile '" + std::string(name) + "'");
}

std::filesystem::path EngineConfig::resolve(const std::string& p) const {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

std::filesystem::path EngineConfig::plan_path() const {
  return resolve(plans_dir) / (std::to_string(stages) + "-stage.json");
}

void EngineConfig::validate() const {
  if (stages < 2 || stages > 6) bad("pipeline.stages", "must lie in [2, 6]");
  if (!(intent_threshold >= 0.0 && intent_threshold < 1.0)) bad("thresholds.intent", "must lie in [0, 1)");
  if (!(tau >= -1.0 && tau <= 1.0)) bad("thresholds.tau", "must lie in [-1, 1]");
  if (max_sweeps < 1) bad("thresholds.max_sweeps", "must be at least 1");
  if (top_k < 1) bad("thresholds.top_k", "must be at least 1");
  if (!(overlap >= 0.0 && overlap <= 1.0)) bad("thresholds.overlap", "must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda < 1.0)) bad("thresholds.lambda", "must lie in [0, 1)");
  if (keyword_mode != "all" && keyword_mode != "any") bad("thresholds.keyword_mode", "must be all or any");
  if (constructor != "deterministic" && constructor != "model") bad("pipeline.constructor", "must be deterministic or model");
  if (recognizer != "embedding" && recognizer != "prompt") bad("pipeline.recognizer", "must be embedding or prompt");
  if (synthesis != "model" && synthesis != "concat") bad("pipeline.synthesis", "must be model or concat");
  if (parallelism < 1 || parallelism > 1024) bad("backend.parallelism", "must lie in [1, 1024]");
  if (retries < 0) bad("backend.retries", "must not be negative");
  if (dimension < 1) bad("embedder.dimension", "must be positive");
  if (profile != BackendProfile::kLive && temperature != 0.0) bad("backend.temperature", "offline profiles run at 0");
  if (!cassette_mode.empty() && cassette_mode != "record" && cassette_mode != "replay" && cassette_mode != "passthrough") {
    bad("backend.cassette_mode", "must be record, replay or passthrough");
  }
  if (profile == BackendProfile::kReplay && cassette.empty()) bad("backend.cassette", "the replay profile needs a cassette");
  if (profile == BackendProfile::kMock && mock_script.empty()) bad("backend.mock_script", "the mock profile needs a script");
  if (profile == BackendProfile::kLive && base_url.empty()) bad("backend.base_url", "the live profile needs a base_url");
  for (const auto* kind : {&intent_embedder, &retrieval_embedder, &token_embedder}) {
    if (*kind != "hash" && *kind != "hash-bow" && *kind != "file" && *kind != "http" &&
        !(kind == &retrieval_embedder && *kind == "none")) {
      bad("embedder", "unknown embedder '" + *kind + "'");
    }
    if (*kind == "file" && embedding_file.empty()) bad("paths.embedding_file", "file embedder needs an embedding file");
  }
  const auto must_exist = [&](const char* key, const std::string& p) {
    if (!std::filesystem::exists(resolve(p))) bad(key, "'" + resolve(p).string() + "' does not exist");
  };
  must_exist("paths.grammar", grammar);
  must_exist("paths.token_lexicon", token_lexicon);
  must_exist("paths.element_lexicon", element_lexicon);
  must_exist("paths.standardize_rules", standardize_rules);
  must_exist("paths.refine_rules", refine_rules);
  must_exist("paths.taxonomy", taxonomy);
  must_exist("paths.templates", templates);
  must_exist("paths.stopwords", stopwords);
  if (!std::filesystem::exists(plan_path())) bad("pipeline.stages", "no plan file " + plan_path().string());
  if (intent_embedder != "file") must_exist("paths.exemplars", exemplars);
  if (!embedding_file.empty()) must_exist("paths.embedding_file", embedding_file);
  if (profile == BackendProfile::kMock) must_exist("backend.mock_script", mock_script);
  if ((profile == BackendProfile::kReplay || cassette_mode == "replay") && !cassette.empty()) {
    must_exist("backend.cassette", cassette);
  }
  for (const auto& [id, p] : stores) must_exist(("stores." + id).c_str(), p);
}

nlohmann::json EngineConfig::fingerprint() const {
  return nlohmann::json{
      {"paths",
       {{"grammar", grammar},
        {"token_lexicon", token_lexicon},
        {"element_lexicon", element_lexicon},
        {"standardize_rules", standardize_rules},
        {"refine_rules", refine_rules},
        {"taxonomy", taxonomy},
        {"exemplars", exemplars},
        {"plans_dir", plans_dir},
        {"templates", templates},
        {"stopwords", stopwords},
        {"embedding_file", embedding_file}}},
      {"stores", stores},
      {"backend",
       {{"profile", std::string(to_string(profile))},
        {"cassette", cassette},
        {"cassette_mode", cassette_mode},
        {"mock_script", mock_script},
        {"base_url", base_url},
        {"model", model},
        {"temperature", temperature},
        {"max_tokens", max_tokens}}},
      {"embedder",
       {{"intent", intent_embedder},
        {"retrieval", retrieval_embedder},
        {"token", token_embedder},
        {"model", embed_model},
        {"dimension", dimension},
        {"seed", seed}}},
      {"thresholds",
       {{"intent", intent_threshold},
        {"tau", tau},
        {"max_sweeps", max_sweeps},
        {"top_k", top_k},
        {"overlap", overlap},
        {"lambda", lambda},
        {"keyword_mode", keyword_mode}}},
      {"pipeline",
       {{"stages", stages},
        {"constructor", constructor},
        {"recognizer", recognizer},
        {"no_rie", no_rie},
        {"no_decision_analysis", no_decision_analysis},
        {"synthesis", synthesis}}},
  };
}

EngineConfig load_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  EngineConfig c;
  c.base_dir = std::filesystem::absolute(path).parent_path();
  for (const auto& [name, section] : tree) {
    if (name == "paths") {
      check_keys(section, name,
                 {"grammar", "token_lexicon", "element_lexicon", "standardize_rules", "refine_rules", "taxonomy",
                  "exemplars", "plans_dir", "templates", "stopwords", "state_dir", "profiles_dir", "embedding_file"});
      read(section, name, "grammar", c.grammar);
      read(section, name, "token_lexicon", c.token_lexicon);
      read(section, name, "element_lexicon", c.element_lexicon);
      read(section, name, "standardize_rules", c.standardize_rules);
      read(section, name, "refine_rules", c.refine_rules);
      read(section, name, "taxonomy", c.taxonomy);
      read(section, name, "exemplars", c.exemplars);
      read(section, name, "plans_dir", c.plans_dir);
      read(section, name, "templates", c.templates);
      read(section, name, "stopwords", c.stopwords);
      read(section, name, "state_dir", c.state_dir);
      read(section, name, "profiles_dir", c.profiles_dir);
      read(section, name, "embedding_file", c.embedding_file);
    } else if (name == "stores") {
      for (const auto& [id, value] : section) c.stores[id] = value.get_value<std::string>();
    } else if (name == "backend") {
      check_keys(section, name,
                 {"profile", "cassette", "cassette_mode", "mock_script", "base_url", "model", "temperature",
                  "max_tokens", "retries", "parallelism", "timeout_seconds"});
      std::string profile = std::string(to_string(c.profile));
      read(section, name, "profile", profile);
      c.profile = parse_backend_profile(profile);
      read(section, name, "cassette", c.cassette);
      read(section, name, "cassette_mode", c.cassette_mode);
      read(section, name, "mock_script", c.mock_script);
      read(section, name, "base_url", c.base_url);
      read(section, name, "model", c.model);
      read(section, name, "temperature", c.temperature);
      read(section, name, "max_tokens", c.max_tokens);
      read(section, name, "retries", c.retries);
      read(section, name, "parallelism", c.parallelism);
      read(section, name, "timeout_seconds", c.timeout_seconds);
    } else if (name == "embedder") {
      check_keys(section, name, {"intent", "retrieval", "token", "model", "dimension", "seed"});
      read(section, name, "intent", c.intent_embedder);
      read(section, name, "retrieval", c.retrieval_embedder);
      read(section, name, "token", c.token_embedder);
      read(section, name, "model", c.embed_model);
      read(section, name, "dimension", c.dimension);
      read(section, name, "seed", c.seed);
    } else if (name == "thresholds") {
      check_keys(section, name, {"intent", "tau", "max_sweeps", "top_k", "overlap", "lambda", "keyword_mode"});
      read(section, name, "intent", c.intent_threshold);
      read(section, name, "tau", c.tau);
      read(section, name, "max_sweeps", c.max_sweeps);
      read(section, name, "top_k", c.top_k);
      read(section, name, "overlap", c.overlap);
      read(section, name, "lambda", c.lambda);
      read(section, name, "keyword_mode", c.keyword_mode);
    } else if (name == "pipeline") {
      check_keys(section, name,
                 {"stages", "constructor", "recognizer", "no_rie", "no_decision_analysis", "synthesis"});
      read(section, name, "stages", c.stages);
      read(section, name, "constructor", c.constructor);
      read(section, name, "recognizer", c.recognizer);
      read(section, name, "no_rie", c.no_rie);
      read(section, name, "no_decision_analysis", c.no_decision_analysis);
      read(section, name, "synthesis", c.synthesis);
    } else {
      throw Error(ErrorCode::kConfig, path.string() + ": unknown section [" + name + "]");
    }
  }
  return c;
}

void apply_overrides(EngineConfig& c, const ConfigOverrides& o) {
  if (o.profile) c.profile = parse_backend_profile(*o.profile);
  if (o.stages) c.stages = *o.stages;
  if (o.threshold) c.intent_threshold = *o.threshold;
  if (o.tau) c.tau = *o.tau;
  if (o.no_rie) c.no_rie = *o.no_rie;
  if (o.recognizer) c.recognizer = *o.recognizer;
  if (o.no_decision_analysis) c.no_decision_analysis = *o.no_decision_analysis;
  if (o.seed) c.seed = *o.seed;
  c.validate();
}

}  // namespace medaide::pipeline
