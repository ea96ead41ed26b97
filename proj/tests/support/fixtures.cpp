#include "fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace medaide::testing {
namespace fs = std::filesystem;

fs::path data_dir() { return MEDAIDE_TEST_DATA_DIR; }
fs::path cli_path() { return MEDAIDE_TEST_CLI; }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + std::to_string(rd() % 100000));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

IniOverrides mock_profile() {
  return {{"backend", {{"profile", "mock"}, {"mock_script", (data_dir() / "mock/script.jsonl").string()}, {"cassette", ""}}}};
}

fs::path write_config(const fs::path& dir, const IniOverrides& overrides, const std::string& name) {
  const auto d = data_dir();
  const auto abs = [&](const char* rel) { return (d / rel).string(); };
  fs::create_directories(dir / "profiles");
  fs::copy(d / "profiles", dir / "profiles", fs::copy_options::overwrite_existing | fs::copy_options::recursive);
  IniOverrides ini = {
      {"paths",
       {{"grammar", abs("grammar/toy_medical.cfg")},
        {"token_lexicon", abs("lexicon/tokens.jsonl")},
        {"element_lexicon", abs("lexicon/elements.jsonl")},
        {"standardize_rules", abs("rules/standardize.jsonl")},
        {"refine_rules", abs("rules/refine.jsonl")},
        {"taxonomy", abs("intents/taxonomy.jsonl")},
        {"exemplars", abs("intents/exemplars.jsonl")},
        {"plans_dir", abs("plans")},
        {"templates", abs("templates")},
        {"stopwords", abs("corpora/stopwords.txt")},
        {"state_dir", (dir / "state").string()},
        {"profiles_dir", (dir / "profiles").string()}}},
      {"stores",
       {{"guidelines", abs("corpora/guidelines.jsonl")},
        {"cases", abs("corpora/cases.jsonl")},
        {"medications", abs("corpora/medications.jsonl")}}},
      {"backend",
       {{"profile", "replay"}, {"cassette", abs("cassettes/fixture.jsonl")}, {"model", "medaide-offline"},
        {"parallelism", "4"}}},
      {"embedder", {{"intent", "hash-bow"}, {"retrieval", "hash-bow"}, {"token", "hash"}, {"dimension", "256"}, {"seed", "7"}}},
      {"thresholds",
       {{"intent", "0.075"},
        {"tau", "0.35"},
        {"max_sweeps", "16"},
        {"top_k", "3"},
        {"overlap", "0.6"},
        {"lambda", "0"},
        {"keyword_mode", "all"}}},
      {"pipeline", {{"stages", "4"}, {"constructor", "deterministic"}, {"recognizer", "embedding"}, {"synthesis", "model"}}},
  };
  for (const auto& [section, keys] : overrides) {
    for (const auto& [k, v] : keys) ini[section][k] = v;
  }
  std::string text;
  for (const auto& [section, keys] : ini) {
    text += "[" + section + "]\n";
    for (const auto& [k, v] : keys) {
      if (!v.empty()) text += k + " = " + v + "\n";
    }
    text += "\n";
  }
  const auto path = dir / name;
  write_text(path, text);
  return path;
}

CliResult run_cli(const std::string& args, const std::string& stdin_text, const std::string& env) {
  TempDir io("medaide-cli");
  const auto in = io / "stdin.txt";
  const auto out = io / "stdout.txt";
  const auto err = io / "stderr.txt";
  write_text(in, stdin_text);
  const std::string cmd = (env.empty() ? std::string() : env + " ") + "'" + cli_path().string() + "' " + args + " <'" +
                          in.string() + "' >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

}  // namespace medaide::testing
