#include "medaide/coordinator/templates.hpp"

#include <algorithm>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"

namespace medaide::coordinator {
namespace {

bool known_placeholder(std::string_view name) {
  return std::find(std::begin(kPlaceholders), std::end(kPlaceholders), name) != std::end(kPlaceholders);
}

std::string key_of(std::string_view stage, TemplateRole role) {
  return std::string(stage) + "." + std::string(to_string(role));
}

}  // namespace

std::string_view to_string(TemplateRole role) {
  switch (role) {
    case TemplateRole::kMain: return "main";
    case TemplateRole::kSupporter: return "supporter";
    case TemplateRole::kIntegrate: return "integrate";
  }
  return "?";
}

PromptTemplate::PromptTemplate(std::string source, std::string name) : source_(std::move(source)), name_(std::move(name)) {
  std::size_t pos = 0;
  while ((pos = source_.find("{{", pos)) != std::string::npos) {
    const auto close = source_.find("}}", pos + 2);
    if (close == std::string::npos) throw Error(ErrorCode::kFormat, name_ + ": unterminated placeholder");
    const std::string key = source_.substr(pos + 2, close - pos - 2);
    if (!known_placeholder(key)) throw Error(ErrorCode::kFormat, name_ + ": unknown placeholder '{{" + key + "}}'");
    if (!uses(key)) used_.push_back(key);
    pos = close + 2;
  }
}

bool PromptTemplate::uses(std::string_view name) const {
  return std::find(used_.begin(), used_.end(), name) != used_.end();
}

std::string PromptTemplate::render(const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = source_.find("{{", pos);
    if (open == std::string::npos) {
      out.append(source_, pos, std::string::npos);
      break;
    }
    out.append(source_, pos, open - pos);
    const auto close = source_.find("}}", open + 2);
    const auto key = std::string_view(source_).substr(open + 2, close - open - 2);
    if (const auto it = values.find(key); it != values.end()) out += it->second;
    pos = close + 2;
  }
  return out;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir, const StagePlan& plan) {
  TemplateSet set;
  const auto read = [&](const std::filesystem::path& p) { return PromptTemplate(io::read_file(p), p.string()); };
  for (const auto& stage : plan.stages) {
    for (const auto role : {TemplateRole::kMain, TemplateRole::kSupporter, TemplateRole::kIntegrate}) {
      auto path = dir / (key_of(stage.id, role) + ".txt");
      if (!std::filesystem::exists(path)) path = dir / (key_of("default", role) + ".txt");
      if (!std::filesystem::exists(path)) {
        throw Error(ErrorCode::kConfig, "no " + std::string(to_string(role)) + " template for stage '" + stage.id +
                                            "' under " + dir.string());
      }
      auto t = read(path);
      if (role != TemplateRole::kMain && !t.uses("initial_output")) {
        throw Error(ErrorCode::kFormat, path.string() + ": must use {{initial_output}}");
      }
      if (role == TemplateRole::kIntegrate && !t.uses("contributions")) {
        throw Error(ErrorCode::kFormat, path.string() + ": must use {{contributions}}");
      }
      set.by_key_.emplace(key_of(stage.id, role), std::move(t));
    }
  }
  const auto synth = dir / "synthesize.txt";
  if (!std::filesystem::exists(synth)) throw Error(ErrorCode::kConfig, "missing " + synth.string());
  set.synthesize_ = read(synth);
  return set;
}

const PromptTemplate& TemplateSet::get(std::string_view stage, TemplateRole role) const {
  const auto it = by_key_.find(key_of(stage, role));
  if (it == by_key_.end()) {
    throw Error(ErrorCode::kNotFound, "no template for '" + key_of(stage, role) + "'");
  }
  return it->second;
}

}  // namespace medaide::coordinator
