#include "medaide/intent/taxonomy.hpp"

#include <set>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"

namespace medaide::intent {

IntentTaxonomy::IntentTaxonomy(std::vector<Intent> intents) : intents_(std::move(intents)) {
  if (intents_.empty()) throw Error(ErrorCode::kInvalidArgument, "taxonomy has no intents");
  std::set<std::string> seen;
  for (const auto& i : intents_) {
    if (i.id.empty()) throw Error(ErrorCode::kInvalidArgument, "intent with empty id");
    if (!seen.insert(i.id).second) throw Error(ErrorCode::kDuplicateId, "intent '" + i.id + "' listed twice");
  }
}

std::optional<std::size_t> IntentTaxonomy::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    if (intents_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> IntentTaxonomy::ids() const {
  std::vector<std::string> out;
  out.reserve(intents_.size());
  for (const auto& i : intents_) out.push_back(i.id);
  return out;
}

IntentTaxonomy load_taxonomy(const std::filesystem::path& path) {
  std::vector<Intent> intents;
  for (const auto& rec : io::read_jsonl(path)) {
    Intent i;
    i.id = io::require_string(rec, "id", path.string());
    i.label = io::optional_string(rec, "label", i.id);
    const auto stage_name = io::require_string(rec, "stage", path.string());
    const auto stage = parse_care_stage(stage_name);
    if (!stage) {
      throw Error(ErrorCode::kFormat,
                  path.string() + ":" + std::to_string(rec.line) + ": unknown stage '" + stage_name + "'");
    }
    i.stage = *stage;
    intents.push_back(std::move(i));
  }
  try {
    return IntentTaxonomy(std::move(intents));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace medaide::intent
