#include "medaide/grammar/grammar.hpp"

#include <sstream>
#include <unordered_set>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::grammar {
namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

RawGrammar parse_grammar_text(std::string_view source) {
  RawGrammar raw;
  std::istringstream in{std::string(source)};
  std::string line;
  std::string current_lhs;
  std::size_t number = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kFormat, "grammar line " + std::to_string(number) + ": " + msg);
  };
  auto add_alternatives = [&](std::string_view body) {
    std::size_t from = 0;
    while (true) {
      const auto bar = body.find('|', from);
      const auto alt = body.substr(from, bar == std::string_view::npos ? std::string_view::npos : bar - from);
      auto symbols = split_ws(alt);
      if (symbols.empty()) fail("empty alternative for " + current_lhs);
      raw.productions.push_back({current_lhs, std::move(symbols)});
      if (bar == std::string_view::npos) break;
      from = bar + 1;
    }
  };
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '|') {
      if (current_lhs.empty()) fail("continuation without a rule");
      add_alternatives(std::string_view(trimmed).substr(1));
      continue;
    }
    const auto arrow = trimmed.find("->");
    if (arrow == std::string::npos) fail("expected '->'");
    const auto lhs = split_ws(std::string_view(trimmed).substr(0, arrow));
    if (lhs.size() != 1) fail("left-hand side must be a single symbol");
    current_lhs = lhs.front();
    if (raw.start.empty()) raw.start = current_lhs;
    add_alternatives(std::string_view(trimmed).substr(arrow + 2));
  }
  if (raw.productions.empty()) throw Error(ErrorCode::kFormat, "grammar has no productions");
  return raw;
}

RawGrammar load_grammar_file(const std::filesystem::path& path) {
  try {
    return parse_grammar_text(io::read_file(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFormat) throw;
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.detail());
  }
}

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  const auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Grammar::nonterminal_names() const {
  std::vector<std::string> out;
  for (SymbolId i = 0; i < names_.size(); ++i) {
    if (!terminal_[i]) out.push_back(names_[i]);
  }
  return out;
}

std::vector<std::string> Grammar::terminal_names() const {
  std::vector<std::string> out;
  for (SymbolId i = 0; i < names_.size(); ++i) {
    if (terminal_[i]) out.push_back(names_[i]);
  }
  return out;
}

std::string Grammar::to_text() const {
  std::string out;
  for (const auto& p : productions_) {
    out += names_[p.lhs] + " ->";
    for (const auto s : p.rhs) out += " " + names_[s];
    out += '\n';
  }
  return out;
}

Grammar normalize_grammar(const RawGrammar& raw) {
  if (raw.productions.empty()) throw Error(ErrorCode::kInvalidArgument, "grammar has no productions");
  Grammar g;
  auto intern = [&g](const std::string& name, bool terminal) {
    if (const auto it = g.ids_.find(name); it != g.ids_.end()) return it->second;
    const auto id = static_cast<SymbolId>(g.names_.size());
    g.names_.push_back(name);
    g.terminal_.push_back(terminal);
    g.ids_.emplace(name, id);
    return id;
  };

  std::unordered_set<std::string> lhs_names;
  for (const auto& p : raw.productions) {
    if (p.rhs.empty()) throw Error(ErrorCode::kInvalidArgument, "empty right-hand side for " + p.lhs);
    lhs_names.insert(p.lhs);
  }
  for (const auto& p : raw.productions) intern(p.lhs, false);
  for (const auto& p : raw.productions) {
    for (const auto& s : p.rhs) intern(s, lhs_names.count(s) == 0);
  }
  if (!lhs_names.count(raw.start)) throw Error(ErrorCode::kInvalidArgument, "start symbol has no productions");
  g.start_ = g.ids_.at(raw.start);

  auto fresh = [&g, &intern](const std::string& base) {
    std::string name = base + "'";
    while (g.ids_.count(name)) name += "'";
    return intern(name, false);
  };

  for (const auto& p : raw.productions) {
    std::vector<SymbolId> rhs;
    for (const auto& s : p.rhs) rhs.push_back(g.ids_.at(s));
    SymbolId lhs = g.ids_.at(p.lhs);
    std::size_t i = 0;
    while (rhs.size() - i > 2) {
      const SymbolId next = fresh(p.lhs);
      g.productions_.push_back({lhs, {rhs[i], next}});
      lhs = next;
      ++i;
    }
    g.productions_.push_back({lhs, {rhs.begin() + static_cast<std::ptrdiff_t>(i), rhs.end()}});
  }

  // Unit chains between nonterminals must be acyclic.
  const auto n = g.names_.size();
  std::vector<std::vector<SymbolId>> unit(n);
  for (const auto& p : g.productions_) {
    if (p.rhs.size() == 1 && !g.terminal_[p.rhs[0]]) unit[p.lhs].push_back(p.rhs[0]);
  }
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<SymbolId> stack;
  auto visit = [&](auto&& self, SymbolId v) -> void {
    state[v] = 1;
    stack.push_back(v);
    for (const auto w : unit[v]) {
      if (state[w] == 1) {
        std::string cycle;
        bool on = false;
        for (const auto s : stack) {
          if (s == w) on = true;
          if (on) cycle += g.names_[s] + " -> ";
        }
        throw Error(ErrorCode::kCyclicUnitChain, cycle + g.names_[w]);
      }
      if (state[w] == 0) self(self, w);
    }
    stack.pop_back();
    state[v] = 2;
  };
  for (SymbolId v = 0; v < n; ++v) {
    if (state[v] == 0) visit(visit, v);
  }
  return g;
}

}  // namespace medaide::grammar
