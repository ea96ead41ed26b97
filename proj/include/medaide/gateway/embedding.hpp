#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "medaide/common/vector.hpp"

namespace medaide::gateway {

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string id() const = 0;
};

enum class HashMode {
  kWholeText,   // one pseudo-random unit vector per distinct text
  kBagOfWords,  // normalized sum of per-word vectors, so shared words correlate
};

// Deterministic offline embedder. The generator is seeded from a SHA-256 of
// the text and draws raw 64-bit words, so vectors are identical on every
// platform.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dimension = 768, HashMode mode = HashMode::kWholeText, std::uint64_t seed = 0);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return dimension_; }
  std::string id() const override;

 private:
  const std::vector<double>& unit_for(std::string_view key) const;

  std::size_t dimension_;
  HashMode mode_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, std::vector<double>> cache_;
};

// Keyed vectors as stored in the binary embedding file.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

  void insert(std::string key, std::vector<double> values);  // DuplicateKey, DimensionMismatch
  const std::vector<double>* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return keys_.size(); }
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::size_t dimension_;
  std::vector<std::string> keys_;
  std::map<std::string, std::vector<double>, std::less<>> values_;
};

inline constexpr char kEmbeddingMagic[4] = {'M', 'A', 'E', 'D'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;

// Little-endian: "MAED", u16 version, u32 dimension, u32 count, then per
// record u16 key length, key bytes, dimension x f32.
EmbeddingTable parse_embedding_bytes(std::string_view bytes);
EmbeddingTable load_embedding_file(const std::filesystem::path& path);
std::string serialize_embedding_table(const EmbeddingTable& table);
void write_embedding_file(const std::filesystem::path& path, const EmbeddingTable& table);

// Exact-key lookup into a loaded table.
class FileEmbedder final : public Embedder {
 public:
  explicit FileEmbedder(EmbeddingTable table, std::string source = "file");

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return table_.dimension(); }
  std::string id() const override { return source_; }
  const EmbeddingTable& table() const { return table_; }

 private:
  EmbeddingTable table_;
  std::string source_;
};

}  // namespace medaide::gateway
