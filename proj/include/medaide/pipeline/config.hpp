#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace medaide::pipeline {

enum class BackendProfile { kLive, kMock, kReplay };
std::string_view to_string(BackendProfile p);
BackendProfile parse_backend_profile(std::string_view name);

// Paths are kept as written (for the fingerprint) and resolved against the
// config file's directory when used.
struct EngineConfig {
  std::filesystem::path base_dir;

  // [paths]
  std::string grammar = "grammar/toy_medical.cfg";
  std::string token_lexicon = "lexicon/tokens.jsonl";
  std::string element_lexicon = "lexicon/elements.jsonl";
  std::string standardize_rules = "rules/standardize.jsonl";
  std::string refine_rules = "rules/refine.jsonl";
  std::string taxonomy = "intents/taxonomy.jsonl";
  std::string exemplars = "intents/exemplars.jsonl";
  std::string plans_dir = "plans";
  std::string templates = "templates";
  std::string stopwords = "corpora/stopwords.txt";
  std::string state_dir = "state";
  std::string profiles_dir = "profiles";
  std::string embedding_file;

  // [stores] id -> corpus file
  std::map<std::string, std::string> stores;

  // [backend]
  BackendProfile profile = BackendProfile::kReplay;
  std::string cassette;
  std::string cassette_mode;  // empty: replay for the replay profile, otherwise off
  std::string mock_script;
  std::string base_url;
  std::string model = "medaide-offline";
  double temperature = 0.0;
  int max_tokens = 512;
  int retries = 1;
  int parallelism = 4;
  int timeout_seconds = 60;

  // [embedder]
  std::string intent_embedder = "hash-bow";
  std::string retrieval_embedder = "hash-bow";
  std::string token_embedder = "hash";
  std::string embed_model;
  int dimension = 768;
  std::uint64_t seed = 0;

  // [thresholds]
  double intent_threshold = 0.10;
  double tau = 0.35;
  int max_sweeps = 16;
  int top_k = 3;
  double overlap = 0.6;
  double lambda = 0.0;
  std::string keyword_mode = "all";

  // [pipeline]
  int stages = 4;
  std::string constructor = "deterministic";
  std::string recognizer = "embedding";
  bool no_rie = false;
  bool no_decision_analysis = false;
  std::string synthesis = "model";

  std::filesystem::path resolve(const std::string& p) const;
  std::filesystem::path plan_path() const;
  // Range and enum checks. Throws Config.
  void validate() const;
  // Every knob that changes behaviour, with paths as written.
  nlohmann::json fingerprint() const;
};

// INI with [section] headers, key = value, `;` or `#` comments. Unknown
// sections or keys are errors. Throws Config.
EngineConfig load_config(const std::filesystem::path& path);

// Command-line values; set fields win over the file. apply_overrides validates the result.
struct ConfigOverrides {
  std::optional<std::string> profile;
  std::optional<int> stages;
  std::optional<double> threshold;
  std::optional<double> tau;
  std::optional<bool> no_rie;
  std::optional<std::string> recognizer;
  std::optional<bool> no_decision_analysis;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(EngineConfig& config, const ConfigOverrides& overrides);

}  // namespace medaide::pipeline
