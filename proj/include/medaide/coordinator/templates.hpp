#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/coordinator/plan.hpp"

namespace medaide::coordinator {

enum class TemplateRole { kMain, kSupporter, kIntegrate };

std::string_view to_string(TemplateRole role);

// The only names allowed inside {{...}}.
inline constexpr std::string_view kPlaceholders[] = {"query",          "elements",       "context", "prior_outputs",
                                                     "initial_output", "contributions", "profile"};

class PromptTemplate {
 public:
  PromptTemplate() = default;
  // Throws Format on an unknown or unterminated placeholder.
  explicit PromptTemplate(std::string source, std::string name = "template");

  const std::string& source() const { return source_; }
  const std::vector<std::string>& placeholders() const { return used_; }
  bool uses(std::string_view name) const;

  // Missing values render as empty strings.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;

 private:
  std::string source_;
  std::string name_;
  std::vector<std::string> used_;
};

// Files under one directory: "<stage>.<role>.txt" with "default.<role>.txt"
// as the fallback, plus "synthesize.txt". Supporter templates must use
// {{initial_output}}; integrate templates {{initial_output}} and
// {{contributions}}.
class TemplateSet {
 public:
  static TemplateSet load(const std::filesystem::path& dir, const StagePlan& plan);

  const PromptTemplate& get(std::string_view stage, TemplateRole role) const;
  const PromptTemplate& synthesize() const { return synthesize_; }

 private:
  std::map<std::string, PromptTemplate, std::less<>> by_key_;
  PromptTemplate synthesize_;
};

}  // namespace medaide::coordinator
