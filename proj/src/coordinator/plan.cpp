#include "medaide/coordinator/plan.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"

namespace medaide::coordinator {

const StageSpec* StagePlan::find_stage(std::string_view id) const {
  for (const auto& s : stages) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const AgentSpec* StagePlan::find_agent(std::string_view id) const {
  for (const auto& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::vector<std::string> StagePlan::supporters(const StageSpec& stage) const {
  std::vector<std::string> out;
  for (const auto& a : agents) {
    if (a.id != stage.main_contact) out.push_back(a.id);
  }
  return out;
}

void validate_plan(const StagePlan& plan, const intent::IntentTaxonomy& taxonomy) {
  const auto fail = [&](const std::string& msg) { throw Error(ErrorCode::kConfig, "plan '" + plan.name + "': " + msg); };
  if (plan.stages.size() < kMinStages || plan.stages.size() > kMaxStages) {
    fail("needs between 2 and 6 stages, has " + std::to_string(plan.stages.size()));
  }
  if (plan.agents.empty()) fail("declares no agents");
  std::set<std::string> agents;
  for (const auto& a : plan.agents) {
    if (!agents.insert(a.id).second) fail("agent '" + a.id + "' declared twice");
  }
  std::set<std::string> stage_ids;
  std::map<std::string, std::string> owner;
  for (const auto& s : plan.stages) {
    if (!stage_ids.insert(s.id).second) fail("stage '" + s.id + "' declared twice");
    if (!agents.count(s.main_contact)) fail("stage '" + s.id + "' names unknown main contact '" + s.main_contact + "'");
    for (const auto& i : s.intents) {
      if (!taxonomy.contains(i)) fail("stage '" + s.id + "' names unknown intent '" + i + "'");
      const auto [it, fresh] = owner.emplace(i, s.id);
      if (!fresh) fail("intent '" + i + "' covered by both '" + it->second + "' and '" + s.id + "'");
    }
  }
  for (const auto& i : taxonomy.intents()) {
    if (!owner.count(i.id)) fail("intent '" + i.id + "' is not covered by any stage");
  }
}

StagePlan plan_from_json(const nlohmann::json& j) {
  StagePlan plan;
  plan.name = j.value("name", std::string("unnamed"));
  for (const auto& a : j.at("agents")) {
    plan.agents.push_back({a.at("id").get<std::string>(), a.value("persona", std::string())});
  }
  std::sort(plan.agents.begin(), plan.agents.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& s : j.at("stages")) {
    StageSpec spec;
    spec.id = s.at("id").get<std::string>();
    spec.title = s.value("title", spec.id);
    spec.main_contact = s.at("main_contact").get<std::string>();
    spec.intents = s.at("intents").get<std::vector<std::string>>();
    spec.stores = s.value("stores", std::vector<std::string>{});
    plan.stages.push_back(std::move(spec));
  }
  return plan;
}

StagePlan load_plan(const std::filesystem::path& path, const intent::IntentTaxonomy& taxonomy) {
  StagePlan plan;
  try {
    plan = plan_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  validate_plan(plan, taxonomy);
  return plan;
}

std::vector<std::string> plan_stages(const intent::IntentActivation& activation, const StagePlan& plan) {
  const std::set<std::string> active(activation.activated.begin(), activation.activated.end());
  std::vector<std::string> out;
  for (const auto& s : plan.stages) {
    if (std::any_of(s.intents.begin(), s.intents.end(), [&](const auto& i) { return active.count(i) > 0; })) {
      out.push_back(s.id);
    }
  }
  return out;
}

}  // namespace medaide::coordinator
