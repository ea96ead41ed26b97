#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "medaide/pipeline/config.hpp"
#include "medaide/pipeline/engine.hpp"

namespace medaide::eval {

struct BenchmarkInstance {
  std::string id;
  std::string query;
  std::string reference;
  std::vector<std::string> intents;
  std::string stage;
};

// JSONL {"id","query","reference","intents":[..],"stage"}. Ids unique,
// references non-empty.
std::vector<BenchmarkInstance> load_benchmark(const std::filesystem::path& path);

// Report column order.
inline constexpr std::array<std::string_view, 6> kMetricNames = {"bleu1",      "bleu2",   "meteor_lite",
                                                                 "bert_score", "rouge_l", "gleu"};
inline constexpr std::array<std::string_view, 6> kMetricTitles = {"BLEU-1",     "BLEU-2",  "Meteor-lite",
                                                                  "BERT-Score", "ROUGE-L", "GLEU"};

struct InstanceResult {
  std::string id;
  bool ok = false;
  std::string error;  // "<Code>: detail" when !ok
  std::string output;
  std::vector<std::string> predicted;
  std::vector<std::string> gold;
  std::map<std::string, double> scores;
  int sweeps = 0;
  std::vector<std::string> stages;
  std::string trace_hash;
};

struct MetricReport {
  nlohmann::json fingerprint;
  std::vector<InstanceResult> instances;  // benchmark order
  std::map<std::string, double> means;    // over successful instances
  double intent_f1 = 0.0;
  std::map<std::string, std::size_t> errors;  // error code -> count
};

// Evaluates instances on up to `parallelism` threads. Per-instance failures
// are tallied, not thrown; a gold intent outside the taxonomy throws Format.
MetricReport run_benchmark(const std::vector<BenchmarkInstance>& instances, const pipeline::Engine& engine,
                           int parallelism);

nlohmann::json report_to_json(const MetricReport& report);
// Fixed-width table: one row of corpus means plus intent F1.
std::string report_table(const MetricReport& report, std::string_view label);

struct AblationCell {
  std::string name;  // "<variant>.<k>-stage"
  pipeline::ConfigOverrides overrides;
};

// JSON {"variants":[{"name", "no_rie"?, "recognizer"?,
// "no_decision_analysis"?}], "stages":[k, ...]}; cells are variants x stages.
std::vector<AblationCell> load_ablation_matrix(const std::filesystem::path& path);

}  // namespace medaide::eval
