#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medaide::grammar {

inline constexpr std::string_view kUnknownClass = "UNK";

// Lowercased surface -> terminal class.
class Lexicon {
 public:
  void add(std::string_view surface, std::string cls);
  // Class for an already-lowercased token, or UNK.
  const std::string& lookup(std::string_view lowered) const;
  std::size_t size() const { return classes_.size(); }

  // JSONL: {"surface": str, "class": str}
  static Lexicon load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, std::string> classes_;
  std::string unknown_{kUnknownClass};
};

struct Token {
  std::string surface;  // exact source bytes
  std::string text;     // lowercased
  std::string cls;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct TokenSequence {
  std::vector<Token> tokens;
  // separators[i] precedes tokens[i]; the last entry trails the final token.
  std::vector<std::string> separators;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }

  std::string reconstruct() const;
};

// Splits on whitespace; punctuation bytes become one-byte tokens.
TokenSequence tokenize(std::string_view source, const Lexicon& lexicon);

}  // namespace medaide::grammar
