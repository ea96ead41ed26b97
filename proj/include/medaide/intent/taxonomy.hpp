#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/common/stage.hpp"

namespace medaide::intent {

struct Intent {
  std::string id;
  std::string label;
  CareStage stage = CareStage::kPreDiagnosis;
};

// Ordered intent list. Position i indexes similarity and probability vectors.
class IntentTaxonomy {
 public:
  IntentTaxonomy() = default;
  explicit IntentTaxonomy(std::vector<Intent> intents);  // DuplicateId, InvalidArgument if empty

  const std::vector<Intent>& intents() const { return intents_; }
  std::size_t size() const { return intents_.size(); }
  const Intent& at(std::size_t i) const { return intents_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  bool contains(std::string_view id) const { return index_of(id).has_value(); }
  std::vector<std::string> ids() const;

 private:
  std::vector<Intent> intents_;
};

// JSONL {"id","label","stage"}; order significant.
IntentTaxonomy load_taxonomy(const std::filesystem::path& path);

}  // namespace medaide::intent
