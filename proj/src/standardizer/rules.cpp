#include "medaide/standardizer/rules.hpp"

#include <algorithm>
#include <set>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::standardizer {
namespace {

constexpr std::pair<RuleKind, std::string_view> kKindNames[] = {
    {RuleKind::kSubqueryFilter, "subquery-filter"},
    {RuleKind::kOverlapRemoval, "overlap-removal"},
    {RuleKind::kConsolidation, "consolidation"},
    {RuleKind::kGrammaticalNormalization, "grammatical-normalization"},
    {RuleKind::kIntentPrioritization, "intent-prioritization"},
    {RuleKind::kFormatStandardization, "format-standardization"},
};

FormatOp parse_op(std::string_view name) {
  if (name == "trim") return FormatOp::kTrim;
  if (name == "collapse-whitespace") return FormatOp::kCollapseWhitespace;
  if (name == "strip-trailing-punctuation") return FormatOp::kStripTrailingPunctuation;
  if (name == "lowercase") return FormatOp::kLowercase;
  throw Error(ErrorCode::kFormat, "unknown format op '" + std::string(name) + "'");
}

std::string strip_trailing_punctuation(std::string s) {
  while (!s.empty()) {
    const auto c = static_cast<unsigned char>(s.back());
    if (text::is_space_byte(c) || (!text::is_word_byte(c) && c != ')' && c != ']')) {
      s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

std::size_t word_count(std::string_view s) { return text::words(s).size(); }

// Stage whose cue words occur most often; nullopt without any hit.
std::optional<CareStage> best_stage(const RewriteRule& rule, std::string_view text) {
  const auto ws = text::words(text);
  const std::string padded = " " + text::join(ws, " ") + " ";
  std::optional<CareStage> best;
  std::size_t best_hits = 0;
  for (const auto stage : kCareStages) {
    const auto it = rule.cues.find(stage);
    if (it == rule.cues.end()) continue;
    std::size_t hits = 0;
    for (const auto& cue : it->second) {
      const std::string needle = " " + text::join(text::words(cue), " ") + " ";
      for (auto pos = padded.find(needle); pos != std::string::npos; pos = padded.find(needle, pos + 1)) ++hits;
    }
    if (hits > best_hits) {
      best_hits = hits;
      best = stage;
    }
  }
  return best;
}

std::string rule_prompt_system(const RewriteRule& rule) {
  return "You rewrite patient queries. Rule " + rule.id + " (" + std::string(to_string(rule.kind)) + "): " +
         rule.instruction;
}

}  // namespace

std::string_view to_string(RuleKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

RuleKind parse_rule_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kFormat, "unknown rule kind '" + std::string(name) + "'");
}

std::string_view to_string(RuleMode mode) {
  return mode == RuleMode::kDeterministic ? "deterministic" : "model-backed";
}

RuleMode parse_rule_mode(std::string_view name) {
  if (name == "deterministic") return RuleMode::kDeterministic;
  if (name == "model-backed") return RuleMode::kModelBacked;
  throw Error(ErrorCode::kFormat, "unknown rule mode '" + std::string(name) + "'");
}

bool is_text_rule(RuleKind kind) {
  return kind == RuleKind::kGrammaticalNormalization || kind == RuleKind::kFormatStandardization;
}

RewriteRule parse_rule(const gateway::Json& j) {
  RewriteRule r;
  r.id = j.at("id").get<std::string>();
  if (r.id.empty()) throw Error(ErrorCode::kFormat, "rule with empty id");
  r.kind = parse_rule_kind(j.at("kind").get<std::string>());
  r.mode = parse_rule_mode(j.value("mode", std::string("deterministic")));
  r.instruction = j.value("instruction", std::string());
  if (r.mode == RuleMode::kModelBacked && r.instruction.empty()) {
    throw Error(ErrorCode::kFormat, "model-backed rule '" + r.id + "' needs an instruction");
  }
  switch (r.kind) {
    case RuleKind::kGrammaticalNormalization: {
      r.pattern = j.at("pattern").get<std::string>();
      r.replacement = j.value("template", std::string());
      auto flags = std::regex::ECMAScript;
      if (j.value("flags", std::string()).find('i') != std::string::npos) flags |= std::regex::icase;
      try {
        r.regex.emplace(r.pattern, flags);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::kFormat, "rule '" + r.id + "': bad pattern: " + e.what());
      }
      break;
    }
    case RuleKind::kFormatStandardization:
      for (const auto& op : j.at("pattern")) r.ops.push_back(parse_op(op.get<std::string>()));
      break;
    case RuleKind::kSubqueryFilter:
      r.min_tokens = j.value("min_tokens", std::size_t{0});
      if (j.contains("pattern")) {
        r.pattern = j.at("pattern").get<std::string>();
        try {
          r.regex.emplace(r.pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
          throw Error(ErrorCode::kFormat, "rule '" + r.id + "': bad pattern: " + e.what());
        }
      }
      break;
    case RuleKind::kOverlapRemoval:
      r.threshold = j.value("threshold", 0.6);
      if (!(r.threshold >= 0.0 && r.threshold <= 1.0)) {
        throw Error(ErrorCode::kFormat, "rule '" + r.id + "': threshold must lie in [0, 1]");
      }
      break;
    case RuleKind::kConsolidation:
      r.min_tokens = j.value("min_tokens", std::size_t{2});
      break;
    case RuleKind::kIntentPrioritization:
      for (const auto& [stage_name, words] : j.at("cues").items()) {
        const auto stage = parse_care_stage(stage_name);
        if (!stage) throw Error(ErrorCode::kFormat, "rule '" + r.id + "': unknown stage '" + stage_name + "'");
        for (const auto& w : words) r.cues[*stage].push_back(w.get<std::string>());
      }
      break;
  }
  return r;
}

RuleSet parse_rules(const std::vector<gateway::Json>& records) {
  RuleSet set;
  std::set<std::string> ids;
  for (const auto& j : records) {
    auto r = parse_rule(j);
    if (!ids.insert(r.id).second) throw Error(ErrorCode::kDuplicateId, "rule '" + r.id + "' defined twice");
    set.rules.push_back(std::move(r));
  }
  return set;
}

RuleSet load_rules(const std::filesystem::path& path) {
  std::vector<gateway::Json> records;
  std::vector<std::size_t> lines;
  for (auto& rec : io::read_jsonl(path)) {
    records.push_back(std::move(rec.value));
    lines.push_back(rec.line);
  }
  RuleSet set;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(lines[i]) + ": ";
    try {
      auto r = parse_rule(records[i]);
      if (!ids.insert(r.id).second) throw Error(ErrorCode::kDuplicateId, "rule '" + r.id + "' defined twice");
      set.rules.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error(e.code(), where + e.detail());
    } catch (const gateway::Json::exception& e) {
      throw Error(ErrorCode::kFormat, where + e.what());
    }
  }
  return set;
}

double overlap_ratio(std::string_view a, std::string_view b) {
  const auto wa = text::words(a);
  const auto wb = text::words(b);
  const std::set<std::string> sa(wa.begin(), wa.end());
  const std::set<std::string> sb(wb.begin(), wb.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& w : sa) shared += sb.count(w);
  return static_cast<double>(shared) / static_cast<double>(sa.size() + sb.size() - shared);
}

std::string apply_text_rule(const RewriteRule& rule, const std::string& input) {
  switch (rule.kind) {
    case RuleKind::kGrammaticalNormalization:
      return std::regex_replace(input, *rule.regex, rule.replacement);
    case RuleKind::kFormatStandardization: {
      std::string s = input;
      for (const auto op : rule.ops) {
        switch (op) {
          case FormatOp::kTrim: s = text::trim(s); break;
          case FormatOp::kCollapseWhitespace: s = text::collapse_whitespace(s); break;
          case FormatOp::kStripTrailingPunctuation: s = strip_trailing_punctuation(s); break;
          case FormatOp::kLowercase: s = text::lower(s); break;
        }
      }
      return s;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument, "rule '" + rule.id + "' is not a text rule");
  }
}

std::vector<Subquery> apply_list_rule(const RewriteRule& rule, const std::vector<Subquery>& items) {
  std::vector<Subquery> out;
  switch (rule.kind) {
    case RuleKind::kSubqueryFilter:
      for (const auto& s : items) {
        if (word_count(s.text) < rule.min_tokens) continue;
        if (rule.regex && std::regex_search(s.text, *rule.regex)) continue;
        out.push_back(s);
      }
      return out;
    case RuleKind::kOverlapRemoval:
      for (const auto& s : items) {
        const bool redundant = std::any_of(out.begin(), out.end(), [&](const Subquery& kept) {
          return overlap_ratio(kept.text, s.text) > rule.threshold;
        });
        if (!redundant) out.push_back(s);
      }
      return out;
    case RuleKind::kConsolidation:
      for (const auto& s : items) {
        if (!out.empty() && word_count(s.text) < rule.min_tokens) {
          out.back().text += " and " + s.text;
        } else {
          out.push_back(s);
        }
      }
      return out;
    case RuleKind::kIntentPrioritization: {
      out = items;
      for (auto& s : out) {
        if (auto stage = best_stage(rule, s.text)) s.hint = stage;
      }
      std::stable_sort(out.begin(), out.end(), [](const Subquery& a, const Subquery& b) {
        const int ra = a.hint ? static_cast<int>(*a.hint) : 4;
        const int rb = b.hint ? static_cast<int>(*b.hint) : 4;
        return ra < rb;
      });
      return out;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument, "rule '" + rule.id + "' is not a list rule");
  }
}

std::string run_text_rule(const RewriteRule& rule, const std::string& input, const gateway::Gateway* gateway) {
  if (rule.mode == RuleMode::kModelBacked && gateway) {
    return gateway->ask(rule_prompt_system(rule), input).content;
  }
  return apply_text_rule(rule, input);
}

std::vector<Subquery> run_list_rule(const RewriteRule& rule, const std::vector<Subquery>& items,
                                    const gateway::Gateway* gateway) {
  if (rule.mode != RuleMode::kModelBacked || !gateway) return apply_list_rule(rule, items);
  std::string user;
  for (const auto& s : items) user += s.text + "\n";
  const auto reply = gateway->ask(rule_prompt_system(rule) + " Answer with one subquery per line.", user);
  std::vector<Subquery> out;
  std::size_t start = 0;
  const auto& body = reply.content;
  while (start <= body.size()) {
    auto end = body.find('\n', start);
    if (end == std::string::npos) end = body.size();
    auto line = text::trim(std::string_view(body).substr(start, end - start));
    if (!line.empty()) {
      Subquery s{line, std::nullopt};
      for (const auto& orig : items) {
        if (orig.text == line) s.hint = orig.hint;
      }
      out.push_back(std::move(s));
    }
    start = end + 1;
  }
  return out;
}

}  // namespace medaide::standardizer
