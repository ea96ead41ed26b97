#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace medaide::io {

using Json = nlohmann::json;

struct JsonLine {
  std::size_t line = 0;  // 1-based
  Json value;
};

std::string read_file(const std::filesystem::path& path);

// Parses one JSON object per non-blank line. Errors carry "path:line".
std::vector<JsonLine> read_jsonl(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Field accessors that name the file position on failure.
std::string require_string(const JsonLine& rec, const char* field, const std::string& where);
std::string optional_string(const JsonLine& rec, const char* field, const std::string& fallback = {});

}  // namespace medaide::io
