#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace medaide {

// The four canonical care stages, in protocol order.
enum class CareStage { kPreDiagnosis = 0, kDiagnosis = 1, kMedicament = 2, kPostDiagnosis = 3 };

inline constexpr std::array<CareStage, 4> kCareStages = {
    CareStage::kPreDiagnosis, CareStage::kDiagnosis, CareStage::kMedicament, CareStage::kPostDiagnosis};

std::string_view to_string(CareStage stage);
std::optional<CareStage> parse_care_stage(std::string_view name);

}  // namespace medaide
