#include "medaide/common/stage.hpp"

namespace medaide {

std::string_view to_string(CareStage stage) {
  switch (stage) {
    case CareStage::kPreDiagnosis: return "pre-diagnosis";
    case CareStage::kDiagnosis: return "diagnosis";
    case CareStage::kMedicament: return "medicament";
    case CareStage::kPostDiagnosis: return "post-diagnosis";
  }
  return "unknown";
}

std::optional<CareStage> parse_care_stage(std::string_view name) {
  for (const auto s : kCareStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

}  // namespace medaide
