#include "medaide/eval/benchmark.hpp"

#include <atomic>
#include <cstdio>
#include <set>
#include <thread>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"
#include "medaide/eval/metrics.hpp"

namespace medaide::eval {
namespace {

InstanceResult evaluate(const BenchmarkInstance& inst, const pipeline::Engine& engine) {
  InstanceResult r;
  r.id = inst.id;
  r.gold = inst.intents;
  try {
    const auto run = engine.run(inst.query);
    r.output = run.final_text;
    r.predicted = run.activation.activated;
    r.sweeps = run.standardized.sweeps;
    r.stages = run.planned_stages;
    r.trace_hash = run.trace_hash;
    r.scores["bleu1"] = bleu_n(r.output, inst.reference, 1);
    r.scores["bleu2"] = bleu_n(r.output, inst.reference, 2);
    r.scores["meteor_lite"] = meteor_lite(r.output, inst.reference);
    r.scores["bert_score"] = bert_score_like(r.output, inst.reference, engine.token_embedder());
    r.scores["rouge_l"] = rouge_l(r.output, inst.reference);
    r.scores["gleu"] = gleu(r.output, inst.reference);
    r.ok = true;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

std::string code_of(const std::string& error) {
  const auto colon = error.find(':');
  return colon == std::string::npos ? error : error.substr(0, colon);
}

}  // namespace

std::vector<BenchmarkInstance> load_benchmark(const std::filesystem::path& path) {
  std::vector<BenchmarkInstance> out;
  std::map<std::string, std::size_t> seen;
  const auto where = path.string();
  for (const auto& rec : io::read_jsonl(path)) {
    BenchmarkInstance b;
    b.id = io::require_string(rec, "id", where);
    b.query = io::require_string(rec, "query", where);
    b.reference = io::require_string(rec, "reference", where);
    b.stage = io::optional_string(rec, "stage");
    const auto it = rec.value.find("intents");
    if (it == rec.value.end() || !it->is_array()) {
      throw Error(ErrorCode::kFormat, where + ":" + std::to_string(rec.line) + ": missing array field 'intents'");
    }
    for (const auto& i : *it) b.intents.push_back(i.get<std::string>());
    if (text::words(b.reference).empty()) {
      throw Error(ErrorCode::kFormat, where + ":" + std::to_string(rec.line) + ": empty reference");
    }
    const auto [pos, fresh] = seen.emplace(b.id, rec.line);
    if (!fresh) {
      throw Error(ErrorCode::kDuplicateId, where + ":" + std::to_string(rec.line) + ": id '" + b.id +
                                               "' already used on line " + std::to_string(pos->second));
    }
    out.push_back(std::move(b));
  }
  return out;
}

MetricReport run_benchmark(const std::vector<BenchmarkInstance>& instances, const pipeline::Engine& engine,
                           int parallelism) {
  for (const auto& inst : instances) {
    for (const auto& i : inst.intents) {
      if (!engine.taxonomy().contains(i)) {
        throw Error(ErrorCode::kFormat, "instance '" + inst.id + "' names unknown intent '" + i + "'");
      }
    }
  }
  MetricReport report;
  report.fingerprint = engine.config().fingerprint();
  report.instances.resize(instances.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) report.instances[i] = evaluate(instances[i], engine);
  };
  const auto threads = static_cast<std::size_t>(std::max(1, parallelism));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, instances.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::set<std::string>> predicted, gold;
  std::size_t ok = 0;
  for (const auto& r : report.instances) {
    if (!r.ok) {
      ++report.errors[code_of(r.error)];
      continue;
    }
    ++ok;
    for (const auto& [name, v] : r.scores) report.means[name] += v;
    predicted.emplace_back(r.predicted.begin(), r.predicted.end());
    gold.emplace_back(r.gold.begin(), r.gold.end());
  }
  for (const auto name : kMetricNames) {
    auto& m = report.means[std::string(name)];
    m = ok ? m / static_cast<double>(ok) : 0.0;
  }
  report.intent_f1 = ok ? intent_f1(predicted, gold) : 0.0;
  return report;
}

nlohmann::json report_to_json(const MetricReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.instances) {
    nlohmann::json row{{"id", r.id}, {"ok", r.ok}};
    if (r.ok) {
      row["scores"] = r.scores;
      row["predicted"] = r.predicted;
      row["gold"] = r.gold;
      row["stages"] = r.stages;
      row["sweeps"] = r.sweeps;
      row["trace_hash"] = r.trace_hash;
      row["output"] = r.output;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"fingerprint", report.fingerprint},
                        {"means", report.means},
                        {"intent_f1", report.intent_f1},
                        {"errors", report.errors},
                        {"instances", rows}};
}

std::string report_table(const MetricReport& report, std::string_view label) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-28s", "Setting");
  out += buf;
  for (const auto t : kMetricTitles) {
    std::snprintf(buf, sizeof buf, " %11s", std::string(t).c_str());
    out += buf;
  }
  out += "   Intent-F1\n";
  std::snprintf(buf, sizeof buf, "%-28s", std::string(label).c_str());
  out += buf;
  for (const auto name : kMetricNames) {
    std::snprintf(buf, sizeof buf, " %11.2f", report.means.at(std::string(name)));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " %11.4f\n", report.intent_f1);
  out += buf;
  std::size_t failed = 0;
  for (const auto& [_, n] : report.errors) failed += n;
  out += "instances: " + std::to_string(report.instances.size()) + ", failed: " + std::to_string(failed) + "\n";
  return out;
}

std::vector<AblationCell> load_ablation_matrix(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  std::vector<AblationCell> cells;
  try {
    const auto stages = j.value("stages", std::vector<int>{4});
    for (const auto& v : j.at("variants")) {
      const auto name = v.at("name").get<std::string>();
      for (const int k : stages) {
        AblationCell cell;
        cell.name = name + "." + std::to_string(k) + "-stage";
        cell.overrides.stages = k;
        cell.overrides.no_rie = v.value("no_rie", false);
        cell.overrides.no_decision_analysis = v.value("no_decision_analysis", false);
        cell.overrides.recognizer = v.value("recognizer", std::string("embedding"));
        cells.push_back(std::move(cell));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  return cells;
}

}  // namespace medaide::eval
