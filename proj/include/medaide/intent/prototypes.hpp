#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "medaide/common/vector.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/intent/taxonomy.hpp"

namespace medaide::intent {

// One vector per taxonomy intent, aligned with taxonomy order.
class PrototypeStore {
 public:
  // Checks arity, shared dimension and non-zero norms.
  PrototypeStore(const IntentTaxonomy& taxonomy, std::vector<EmbeddingVector> vectors);

  const std::vector<EmbeddingVector>& vectors() const { return vectors_; }
  const EmbeddingVector& at(std::size_t i) const { return vectors_.at(i); }
  std::size_t size() const { return vectors_.size(); }
  std::size_t dimension() const { return dimension_; }

 private:
  std::vector<EmbeddingVector> vectors_;
  std::size_t dimension_ = 0;
};

// Vectors keyed by intent id. Missing ids raise UnknownKey.
PrototypeStore prototypes_from_table(const IntentTaxonomy& taxonomy, const gateway::EmbeddingTable& table);

struct Exemplar {
  std::string key;
  std::string text;
};

// JSONL {"key","text"}: the same records the exporter consumes.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);

// Embeds each intent's exemplar; every intent needs exactly one.
PrototypeStore prototypes_from_exemplars(const IntentTaxonomy& taxonomy, const std::vector<Exemplar>& exemplars,
                                         const gateway::Embedder& embedder);

}  // namespace medaide::intent
