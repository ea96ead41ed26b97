#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace medaide::testing {

std::filesystem::path data_dir();
std::filesystem::path cli_path();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "medaide");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// section -> key -> value
using IniOverrides = std::map<std::string, std::map<std::string, std::string>>;

// The shipped replay setup with every data path made absolute and state and
// profiles redirected into `dir` (profiles are copied there first).
std::filesystem::path write_config(const std::filesystem::path& dir, const IniOverrides& overrides = {},
                                   const std::string& name = "medaide.ini");

// The mock profile with the shipped script, no cassette.
IniOverrides mock_profile();

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI through /bin/sh. `env` is a prefix such as "FOO=1".
CliResult run_cli(const std::string& args, const std::string& stdin_text = {}, const std::string& env = {});

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace medaide::testing
