#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"
#include "medaide/eval/benchmark.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/pipeline/config.hpp"
#include "medaide/pipeline/engine.hpp"
#include "medaide/retrieval/document.hpp"
#include "medaide/retrieval/index.hpp"

namespace {

using namespace medaide;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

// Raised while loading configuration and resources; everything else that
// fails at run time maps to the pipeline exit code.
struct ConfigFailure {
  std::string message;
};

struct Globals {
  std::string config_path;
  pipeline::ConfigOverrides overrides;
  bool explain = false;
  std::string patient;
};

pipeline::EngineConfig load_effective_config(const Globals& g) {
  try {
    auto c = pipeline::load_config(g.config_path);
    pipeline::apply_overrides(c, g.overrides);
    return c;
  } catch (const Error& e) {
    throw ConfigFailure{e.what()};
  }
}

std::unique_ptr<pipeline::Engine> make_engine(pipeline::EngineConfig config) {
  try {
    return std::make_unique<pipeline::Engine>(std::move(config));
  } catch (const Error& e) {
    throw ConfigFailure{e.what()};
  }
}

std::optional<coordinator::PatientProfile> lookup_patient(const pipeline::Engine& engine, const std::string& id) {
  if (id.empty()) return std::nullopt;
  if (engine.profiles().contains(id)) return engine.profiles().get(id);
  coordinator::PatientProfile p;
  p.id = id;
  return p;
}

void print_explain(const pipeline::RunResult& r, const intent::IntentTaxonomy& taxonomy) {
  std::printf("standardized: %s\n", r.standardized.text.c_str());
  std::printf("sweeps: %d converged: %s\n", r.standardized.sweeps, r.standardized.converged ? "yes" : "no");
  std::printf("parse: %s\n", r.parsed ? r.tree.c_str() : "(no parse, flat segmentation)");
  for (const auto& e : r.elements.elements) {
    std::printf("element: %s \"%s\"\n", std::string(standardizer::to_string(e.kind)).c_str(), e.surface.c_str());
  }
  for (const auto& c : r.context) std::printf("context: %s %.6f\n", c.id.c_str(), c.score);
  std::printf("refined: %s\n", r.refined.merged_text.c_str());
  double total = 0.0;
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    const bool on = std::find(r.activation.activated.begin(), r.activation.activated.end(), taxonomy.at(i).id) !=
                    r.activation.activated.end();
    std::printf("intent %-40s p=%.6f%s\n", taxonomy.at(i).id.c_str(), r.activation.probabilities[i], on ? " *" : "");
    total += r.activation.probabilities[i];
  }
  std::printf("probability sum: %.9f threshold: %.4f fallback: %s\n", total, r.activation.threshold_used,
              r.activation.fallback_applied ? "yes" : "no");
  std::printf("stages: %s\n", text::join(r.planned_stages, " -> ").c_str());
  std::printf("trace: %zu events, hash %s\n", r.trace.size(), r.trace_hash.c_str());
  std::printf("---\n");
}

int cmd_ingest(const Globals& g, const std::string& store, const std::string& file) {
  const auto config = load_effective_config(g);
  if (!coordinator::valid_patient_id(store)) {
    std::fprintf(stderr, "error: invalid store id '%s'\n", store.c_str());
    return kExitUsage;
  }
  const auto docs = retrieval::load_corpus(file, store);
  std::string out;
  for (const auto& d : docs) {
    out += nlohmann::json{{"id", d.id}, {"title", d.title}, {"body", d.body}, {"tags", d.tags}}.dump() + "\n";
  }
  io::write_file_atomic(config.resolve(config.state_dir) / "stores" / (store + ".jsonl"), out);
  std::printf("ingested %zu documents into %s\n", docs.size(), store.c_str());
  return kExitOk;
}

int cmd_index(const Globals& g, const std::string& store) {
  const auto config = load_effective_config(g);
  std::filesystem::path source;
  try {
    source = pipeline::corpus_path(config, store);
  } catch (const Error& e) {
    throw ConfigFailure{e.what()};
  }
  const auto docs = retrieval::load_corpus(source, store);
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "store '" + store + "' has no documents");
  retrieval::Stopwords stopwords;
  try {
    stopwords = retrieval::Stopwords::load(config.resolve(config.stopwords));
  } catch (const Error& e) {
    throw ConfigFailure{e.what()};
  }
  retrieval::DocumentStore ds(store, docs, stopwords);
  const auto dir = config.resolve(config.state_dir) / "index";
  io::write_file_atomic(dir / (store + ".index.json"), ds.index().to_json().dump() + "\n");
  std::size_t vectors = 0;
  if (config.retrieval_embedder == "hash" || config.retrieval_embedder == "hash-bow") {
    const auto embedder = pipeline::make_embedder(config, config.retrieval_embedder, nullptr);
    ds.embed_documents(*embedder);
    gateway::EmbeddingTable table(embedder->dimension());
    for (const auto& d : ds.documents()) table.insert(d.id, d.vector->values);
    gateway::write_embedding_file(dir / (store + ".vectors.maed"), table);
    vectors = table.size();
  }
  std::printf("store %s: docs %zu terms %zu postings %zu vectors %zu\n", store.c_str(), ds.index().doc_count,
              ds.index().term_count(), ds.index().posting_count(), vectors);
  return kExitOk;
}

int cmd_run(const Globals& g, const std::string& query, const std::string& trace_out) {
  const auto engine = make_engine(load_effective_config(g));
  pipeline::RunContext ctx;
  ctx.profile = lookup_patient(*engine, g.patient);
  const auto r = engine->run(query, ctx);
  if (g.explain) print_explain(r, engine->taxonomy());
  std::printf("%s\n", r.final_text.c_str());
  if (!trace_out.empty()) io::write_file_atomic(trace_out, coordinator::to_jsonl(r.trace));
  return kExitOk;
}

int cmd_export_trace(const Globals& g, const std::string& query, const std::string& out) {
  const auto engine = make_engine(load_effective_config(g));
  pipeline::RunContext ctx;
  ctx.profile = lookup_patient(*engine, g.patient);
  const auto r = engine->run(query, ctx);
  const auto jsonl = coordinator::to_jsonl(r.trace);
  if (out.empty()) {
    std::fwrite(jsonl.data(), 1, jsonl.size(), stdout);
  } else {
    io::write_file_atomic(out, jsonl);
  }
  std::fprintf(stderr, "trace hash %s\n", r.trace_hash.c_str());
  return kExitOk;
}

int cmd_chat(const Globals& g) {
  const auto engine = make_engine(load_effective_config(g));
  auto profile = lookup_patient(*engine, g.patient);
  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::optional<pipeline::RunResult> last;
  EmbeddingVector previous;
  int turn = 0;
  std::string line;
  while (true) {
    if (interactive) {
      std::printf("> ");
      std::fflush(stdout);
    }
    if (!std::getline(std::cin, line)) break;
    const auto input = text::trim(line);
    if (input.empty()) continue;
    if (input == "/quit") break;
    if (input == "/intents") {
      if (!last) {
        std::printf("(no turn yet)\n");
      } else {
        std::printf("activated: %s%s\n", text::join(last->activation.activated, ", ").c_str(),
                    last->activation.fallback_applied ? " (fallback)" : "");
      }
      continue;
    }
    if (input == "/trace") {
      std::printf("%s", last ? coordinator::to_jsonl(last->trace).c_str() : "(no turn yet)\n");
      continue;
    }
    if (input == "/profile") {
      std::printf("%s", profile ? coordinator::render_profile(*profile).c_str() : "(no patient)\n");
      continue;
    }
    if (input.front() == '/') {
      std::printf("unknown command %s (try /intents, /trace, /profile, /quit)\n", input.c_str());
      continue;
    }
    ++turn;
    pipeline::RunContext ctx;
    ctx.profile = profile;
    ctx.previous_query = previous.values.empty() ? nullptr : &previous;
    ctx.salt = "turn-" + std::to_string(turn);
    try {
      auto r = engine->run(input, ctx);
      if (g.explain) print_explain(r, engine->taxonomy());
      std::printf("%s\n", r.final_text.c_str());
      previous = r.query_vector;
      if (profile) profile->visits.push_back({"turn " + std::to_string(turn), input});
      last = std::move(r);
    } catch (const Error& e) {
      std::printf("error: %s\n", e.what());
    }
    std::fflush(stdout);
  }
  if (profile && turn > 0) engine->profiles().upsert(*profile);
  return kExitOk;
}

void write_report(const std::filesystem::path& dir, const std::string& name, const eval::MetricReport& report) {
  io::write_file_atomic(dir / (name + ".json"), eval::report_to_json(report).dump(2) + "\n");
  io::write_file_atomic(dir / (name + ".txt"), eval::report_table(report, name));
}

std::filesystem::path report_dir(const pipeline::EngineConfig& config, const std::string& out) {
  return out.empty() ? config.resolve(config.state_dir) / "reports" : std::filesystem::path(out);
}

int cmd_bench(const Globals& g, const std::string& file, const std::string& out, const std::string& name) {
  auto config = load_effective_config(g);
  const auto instances = eval::load_benchmark(file);
  const int parallelism = config.parallelism;
  const auto dir = report_dir(config, out);
  const auto engine = make_engine(std::move(config));
  const auto report = eval::run_benchmark(instances, *engine, parallelism);
  write_report(dir, name, report);
  std::printf("%s", eval::report_table(report, name).c_str());
  return kExitOk;
}

int cmd_ablate(const Globals& g, const std::string& matrix, const std::string& bench_file, const std::string& out) {
  const auto base = load_effective_config(g);
  std::vector<eval::AblationCell> cells;
  try {
    cells = eval::load_ablation_matrix(matrix);
  } catch (const Error& e) {
    throw ConfigFailure{e.what()};
  }
  const auto instances = eval::load_benchmark(bench_file);
  const auto dir = report_dir(base, out);
  int failed = 0;
  for (const auto& cell : cells) {
    auto config = base;
    try {
      pipeline::apply_overrides(config, cell.overrides);
      const auto engine = std::make_unique<pipeline::Engine>(config);
      const auto report = eval::run_benchmark(instances, *engine, config.parallelism);
      write_report(dir, cell.name, report);
      std::size_t errors = 0;
      for (const auto& [_, n] : report.errors) errors += n;
      std::printf("%s", eval::report_table(report, cell.name).c_str());
      std::printf("cell %s: %s\n", cell.name.c_str(), errors == 0 ? "ok" : "completed with instance errors");
    } catch (const Error& e) {
      ++failed;
      std::printf("cell %s: failed: %s\n", cell.name.c_str(), e.what());
    }
  }
  return failed == 0 ? kExitOk : kExitPipeline;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline medical consultation pipeline: query extraction, intent matching, rotating agent protocol."};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  const char* env_config = std::getenv("MEDAIDE_CONFIG");
  g.config_path = env_config ? env_config : "data/medaide.ini";
  app.add_option("--config", g.config_path, "INI configuration file");
  app.add_option_function<std::string>("--profile", [&](const std::string& v) { g.overrides.profile = v; },
                                       "Backend profile: live, mock or replay");
  app.add_option_function<int>("--stages", [&](const int& v) { g.overrides.stages = v; }, "Stage plan granularity (2-6)");
  app.add_option_function<double>("--threshold", [&](const double& v) { g.overrides.threshold = v; },
                                  "Intent activation threshold");
  app.add_option_function<double>("--tau", [&](const double& v) { g.overrides.tau = v; }, "Semantic retrieval threshold");
  app.add_flag_callback("--no-rie", [&] { g.overrides.no_rie = true; }, "Skip query extraction, match the raw query");
  app.add_option_function<std::string>("--recognizer", [&](const std::string& v) { g.overrides.recognizer = v; },
                                       "Intent recognizer: embedding or prompt");
  app.add_flag_callback("--no-decision-analysis", [&] { g.overrides.no_decision_analysis = true; },
                        "Concatenate outputs instead of integrating them");
  app.add_flag("--explain", g.explain, "Print intermediate results");
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { g.overrides.seed = v; },
                                         "Seed for the hash embedders");
  app.add_option("--patient", g.patient, "Patient id in the profile store");

  std::string store, file, query, trace_out, out, name = "bench", matrix, bench_file;
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus file and store it under the state directory");
  ingest->add_option("store", store)->required();
  ingest->add_option("file", file)->required();
  auto* index = app.add_subcommand("index", "Build and persist the inverted index and vectors of a store");
  index->add_option("store", store)->required();
  auto* run = app.add_subcommand("run", "Answer one query");
  run->add_option("query", query)->required();
  run->add_option("--trace-out", trace_out, "Write the protocol trace as JSONL");
  auto* chat = app.add_subcommand("chat", "Line-oriented consultation; /intents /trace /profile /quit");
  auto* bench = app.add_subcommand("bench", "Run a benchmark file and write a report");
  bench->add_option("file", file)->required();
  bench->add_option("--out", out, "Report directory");
  bench->add_option("--name", name, "Report name");
  auto* ablate = app.add_subcommand("ablate", "Run an ablation matrix over a benchmark");
  ablate->add_option("matrix", matrix)->required();
  ablate->add_option("--benchmark", bench_file)->required();
  ablate->add_option("--out", out, "Report directory");
  auto* export_trace = app.add_subcommand("export-trace", "Run a query and emit only its protocol trace");
  export_trace->add_option("query", query)->required();
  export_trace->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(g, store, file);
    if (*index) return cmd_index(g, store);
    if (*run) return cmd_run(g, query, trace_out);
    if (*chat) return cmd_chat(g);
    if (*bench) return cmd_bench(g, file, out, name);
    if (*ablate) return cmd_ablate(g, matrix, bench_file, out);
    if (*export_trace) return cmd_export_trace(g, query, out);
  } catch (const ConfigFailure& f) {
    std::fprintf(stderr, "config error: %s\n", f.message.c_str());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPipeline;
  }
  return kExitUsage;
}
