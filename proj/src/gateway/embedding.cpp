#include "medaide/gateway/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::gateway {

HashEmbedder::HashEmbedder(std::size_t dimension, HashMode mode, std::uint64_t seed)
    : dimension_(dimension), mode_(mode), seed_(seed) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

std::string HashEmbedder::id() const {
  return std::string(mode_ == HashMode::kWholeText ? "hash" : "hash-bow") + "/" + std::to_string(dimension_) + "/" +
         std::to_string(seed_);
}

const std::vector<double>& HashEmbedder::unit_for(std::string_view key) const {
  std::lock_guard lock(mu_);
  if (const auto it = cache_.find(std::string(key)); it != cache_.end()) return it->second;

  std::mt19937_64 gen(stable_hash64(std::to_string(seed_) + '\x1f' + std::string(key)));
  std::vector<double> v(dimension_);
  double sq = 0.0;
  for (auto& x : v) {
    // 53 random mantissa bits mapped to [-1, 1).
    x = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
    sq += x * x;
  }
  const double n = std::sqrt(sq);
  for (auto& x : v) x /= n;
  // Unbounded growth is fine for the corpus sizes this runs on.
  return cache_.emplace(std::string(key), std::move(v)).first->second;
}

EmbeddingVector HashEmbedder::embed(std::string_view text_in) const {
  if (text::trim(text_in).empty()) throw Error(ErrorCode::kEmptyInput, "cannot embed empty text");
  EmbeddingVector out;
  out.source = id();
  if (mode_ == HashMode::kWholeText) {
    out.values = unit_for(text_in);
    return out;
  }
  const auto toks = text::words(text_in);
  if (toks.empty()) throw Error(ErrorCode::kEmptyInput, "text has no words");
  out.values.assign(dimension_, 0.0);
  for (const auto& t : toks) {
    const auto& u = unit_for(t);
    for (std::size_t i = 0; i < dimension_; ++i) out.values[i] += u[i];
  }
  const double n = norm(out);
  for (auto& x : out.values) x /= n;
  return out;
}

void EmbeddingTable::insert(std::string key, std::vector<double> values) {
  if (dimension_ == 0 && keys_.empty()) dimension_ = values.size();
  if (values.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "key '" + key + "' has dimension " + std::to_string(values.size()));
  }
  if (values_.count(key)) throw Error(ErrorCode::kDuplicateKey, key);
  keys_.push_back(key);
  values_.emplace(std::move(key), std::move(values));
}

const std::vector<double>* EmbeddingTable::find(std::string_view key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kTruncatedFile, std::string("file ends inside ") + what + " at byte " + std::to_string(pos_));
    }
  }
  std::uint64_t uint(std::size_t width, const char* what) {
    need(width, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_uint(std::string& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

EmbeddingTable parse_embedding_bytes(std::string_view bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kEmbeddingMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "expected MAED");
  }
  Reader r(bytes);
  r.take(4, "magic");
  const auto version = r.uint(2, "version");
  if (version != kEmbeddingVersion) throw Error(ErrorCode::kBadVersion, "version " + std::to_string(version));
  const auto dim = static_cast<std::size_t>(r.uint(4, "dimension"));
  const auto count = r.uint(4, "record count");
  EmbeddingTable table(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto key_len = static_cast<std::size_t>(r.uint(2, "key length"));
    std::string key(r.take(key_len, "key"));
    std::vector<double> values(dim);
    for (auto& x : values) {
      x = static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(r.uint(4, "vector"))));
    }
    table.insert(std::move(key), std::move(values));
  }
  if (!r.done()) throw Error(ErrorCode::kFormat, "trailing bytes after " + std::to_string(count) + " records");
  return table;
}

EmbeddingTable load_embedding_file(const std::filesystem::path& path) {
  return parse_embedding_bytes(io::read_file(path));
}

std::string serialize_embedding_table(const EmbeddingTable& table) {
  std::string out(kEmbeddingMagic, 4);
  put_uint(out, kEmbeddingVersion, 2);
  put_uint(out, table.dimension(), 4);
  put_uint(out, table.size(), 4);
  for (const auto& key : table.keys()) {
    if (key.size() > 0xffff) throw Error(ErrorCode::kInvalidArgument, "key longer than 65535 bytes");
    put_uint(out, key.size(), 2);
    out.append(key);
    for (const double x : *table.find(key)) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite value under key '" + key + "'");
      put_uint(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)), 4);
    }
  }
  return out;
}

void write_embedding_file(const std::filesystem::path& path, const EmbeddingTable& table) {
  io::write_file_atomic(path, serialize_embedding_table(table));
}

FileEmbedder::FileEmbedder(EmbeddingTable table, std::string source)
    : table_(std::move(table)), source_(std::move(source)) {}

EmbeddingVector FileEmbedder::embed(std::string_view text_in) const {
  if (text_in.empty()) throw Error(ErrorCode::kEmptyInput, "cannot embed empty text");
  const auto* v = table_.find(text_in);
  if (!v) throw Error(ErrorCode::kUnknownKey, "no vector for '" + std::string(text_in.substr(0, 80)) + "'");
  return EmbeddingVector{*v, source_};
}

}  // namespace medaide::gateway
