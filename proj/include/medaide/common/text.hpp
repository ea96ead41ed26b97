#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Shared text scanning. Words are maximal runs of ASCII alphanumerics or
// non-ASCII bytes; every other non-space byte is a one-byte punctuation piece.
namespace medaide::text {

struct Piece {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool word = true;
};

bool is_word_byte(unsigned char c);
bool is_space_byte(unsigned char c);

std::vector<Piece> scan(std::string_view s);

// Lowercased words with punctuation dropped. This is the tokenizer used by the
// metrics, the retrieval index and the bag-of-words embedder.
std::vector<std::string> words(std::string_view s);

std::string lower(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace medaide::text
