#include "medaide/intent/prototypes.hpp"

#include <map>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"

namespace medaide::intent {

PrototypeStore::PrototypeStore(const IntentTaxonomy& taxonomy, std::vector<EmbeddingVector> vectors)
    : vectors_(std::move(vectors)) {
  if (vectors_.size() != taxonomy.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prototype count " + std::to_string(vectors_.size()) +
                                                 " does not match taxonomy size " + std::to_string(taxonomy.size()));
  }
  dimension_ = vectors_.front().dimension();
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].dimension() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch, "prototype '" + taxonomy.at(i).id + "' has dimension " +
                                                     std::to_string(vectors_[i].dimension()));
    }
    if (!(norm(vectors_[i]) > 0.0)) {
      throw Error(ErrorCode::kZeroNorm, "prototype '" + taxonomy.at(i).id + "' has zero norm");
    }
  }
}

PrototypeStore prototypes_from_table(const IntentTaxonomy& taxonomy, const gateway::EmbeddingTable& table) {
  std::vector<EmbeddingVector> vectors;
  for (const auto& intent : taxonomy.intents()) {
    const auto* v = table.find(intent.id);
    if (!v) throw Error(ErrorCode::kUnknownKey, "embedding file has no prototype for '" + intent.id + "'");
    vectors.push_back({*v, "file"});
  }
  return PrototypeStore(taxonomy, std::move(vectors));
}

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
  std::vector<Exemplar> out;
  for (const auto& rec : io::read_jsonl(path)) {
    out.push_back({io::require_string(rec, "key", path.string()), io::require_string(rec, "text", path.string())});
  }
  return out;
}

PrototypeStore prototypes_from_exemplars(const IntentTaxonomy& taxonomy, const std::vector<Exemplar>& exemplars,
                                         const gateway::Embedder& embedder) {
  std::map<std::string, std::string, std::less<>> by_key;
  for (const auto& e : exemplars) {
    if (!by_key.emplace(e.key, e.text).second) {
      throw Error(ErrorCode::kDuplicateKey, "exemplar key '" + e.key + "' listed twice");
    }
  }
  std::vector<EmbeddingVector> vectors;
  for (const auto& intent : taxonomy.intents()) {
    const auto it = by_key.find(intent.id);
    if (it == by_key.end()) throw Error(ErrorCode::kUnknownKey, "no exemplar for intent '" + intent.id + "'");
    vectors.push_back(embedder.embed(it->second));
  }
  return PrototypeStore(taxonomy, std::move(vectors));
}

}  // namespace medaide::intent
