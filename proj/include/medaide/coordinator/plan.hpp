#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/intent/matcher.hpp"
#include "medaide/intent/taxonomy.hpp"

namespace medaide::coordinator {

struct AgentSpec {
  std::string id;
  std::string persona;
};

struct StageSpec {
  std::string id;
  std::string title;
  std::string main_contact;
  std::vector<std::string> intents;
  std::vector<std::string> stores;
};

inline constexpr std::size_t kMinStages = 2;
inline constexpr std::size_t kMaxStages = 6;

struct StagePlan {
  std::string name;
  std::vector<AgentSpec> agents;  // sorted by id; this is the supporter order
  std::vector<StageSpec> stages;  // execution order

  std::size_t granularity() const { return stages.size(); }
  const StageSpec* find_stage(std::string_view id) const;
  const AgentSpec* find_agent(std::string_view id) const;
  // Everyone but the stage's main contact, in agent-id order.
  std::vector<std::string> supporters(const StageSpec& stage) const;
};

// Throws Config unless: 2..6 stages with unique ids, main contacts are
// declared agents, every taxonomy intent is covered by exactly one stage and
// no stage names an unknown intent.
void validate_plan(const StagePlan& plan, const intent::IntentTaxonomy& taxonomy);

// JSON {"name","agents":[{"id","persona"}],"stages":[{"id","title",
// "main_contact","intents":[..],"stores":[..]}]}
StagePlan load_plan(const std::filesystem::path& path, const intent::IntentTaxonomy& taxonomy);
StagePlan plan_from_json(const nlohmann::json& j);

// Stages covering at least one activated intent, in plan order.
std::vector<std::string> plan_stages(const intent::IntentActivation& activation, const StagePlan& plan);

}  // namespace medaide::coordinator
