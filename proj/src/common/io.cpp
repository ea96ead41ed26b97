#include "medaide/common/io.hpp"

#include <fstream>
#include <sstream>

#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"

namespace medaide::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<JsonLine> read_jsonl(const std::filesystem::path& path) {
  const std::string contents = read_file(path);
  std::vector<JsonLine> out;
  std::istringstream in(contents);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    try {
      Json value = Json::parse(line);
      if (!value.is_object()) {
        throw Error(ErrorCode::kFormat, path.string() + ":" + std::to_string(number) + ": expected a JSON object");
      }
      out.push_back({number, std::move(value)});
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kFormat, path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "rename " + tmp.string() + ": " + ec.message());
}

std::string require_string(const JsonLine& rec, const char* field, const std::string& where) {
  const auto it = rec.value.find(field);
  if (it == rec.value.end() || !it->is_string()) {
    throw Error(ErrorCode::kFormat,
                where + ":" + std::to_string(rec.line) + ": missing string field '" + field + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const JsonLine& rec, const char* field, const std::string& fallback) {
  const auto it = rec.value.find(field);
  if (it == rec.value.end() || !it->is_string()) return fallback;
  return it->get<std::string>();
}

}  // namespace medaide::io
