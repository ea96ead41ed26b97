#include "medaide/coordinator/protocol.hpp"

#include <algorithm>

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/text.hpp"

namespace medaide::coordinator {
namespace {

using Values = std::map<std::string, std::string, std::less<>>;

std::string render_context(const std::vector<StoreContext>& retrieved) {
  std::string out;
  for (const auto& c : retrieved) out += c.rendered;
  return out.empty() ? "(no retrieved knowledge)" : out;
}

Values base_values(const StageInput& input) {
  return Values{{"query", input.query},
                {"elements", input.elements},
                {"context", render_context(input.retrieved)},
                {"prior_outputs", render_prior_outputs(input.prior_outputs)},
                {"profile", input.profile.empty() ? "(no profile)" : input.profile}};
}

std::string system_for(const StagePlan& plan, const std::string& agent_id, const StageSpec& stage) {
  const auto* agent = plan.find_agent(agent_id);
  std::string s = "You are agent " + agent_id;
  if (agent && !agent->persona.empty()) s += ", " + agent->persona;
  s += ". Current stage: " + stage.title + ".";
  return s;
}

struct Call {
  std::string reply;
  std::uint64_t seq;
};

Call call_agent(const gateway::Gateway& gateway, TraceLog& trace, std::string_view session, const std::string& stage,
                EventKind kind, const std::string& agent, const std::string& system, const std::string& user) {
  const auto request = gateway.make_request(system, user);
  const auto reply = gateway.send(request);
  TraceEvent e;
  e.session = std::string(session);
  e.stage = stage;
  e.kind = kind;
  e.agent = agent;
  e.request_hash = gateway::request_hash(request);
  e.response_hash = sha256_hex(reply.content);
  return {reply.content, trace.append(std::move(e))};
}

std::uint64_t record_local(TraceLog& trace, std::string_view session, const std::string& stage, EventKind kind,
                           const std::string& input, const std::string& output) {
  TraceEvent e;
  e.session = std::string(session);
  e.stage = stage;
  e.kind = kind;
  e.agent = std::string(kLocalAgent);
  e.request_hash = sha256_hex(input);
  e.response_hash = sha256_hex(output);
  return trace.append(std::move(e));
}

std::string render_docs(const retrieval::DocumentStore& store, const retrieval::RetrievalResult& r, std::size_t k) {
  std::string out;
  for (std::size_t i = 0; i < r.final_ids.size() && i < k; ++i) {
    const auto* d = store.find(r.final_ids[i]);
    out += "[" + store.id() + "/" + d->id + "] " + d->title + ": " + d->body + "\n";
  }
  return out;
}

}  // namespace

std::string render_elements(const standardizer::ClinicalElementSet& elements) {
  if (elements.empty()) return "(none extracted)";
  std::string out;
  for (const auto& e : elements.elements) {
    out += std::string(standardizer::to_string(e.kind)) + ": " + e.surface + "\n";
  }
  return out;
}

std::string render_prior_outputs(const std::vector<StageOutput>& outputs) {
  if (outputs.empty()) return "(none)";
  std::vector<std::string> parts;
  for (const auto& o : outputs) parts.push_back("## " + o.title + "\n" + o.integrated);
  return text::join(parts, "\n\n");
}

std::string render_contributions(const std::vector<std::pair<std::string, std::string>>& contributions) {
  std::vector<std::string> parts;
  for (const auto& [agent, body] : contributions) parts.push_back("[" + agent + "]\n" + body);
  return text::join(parts, "\n\n");
}

std::vector<StoreContext> stage_knowledge(const StageSpec& stage, std::string_view query,
                                          const standardizer::ClinicalElementSet& elements,
                                          const PatientProfile* profile, const KnowledgeBase& kb) {
  std::vector<StoreContext> out;
  std::string probe(query);
  if (!elements.empty()) probe += " " + elements.joined();
  for (const auto& store_id : stage.stores) {
    const auto it = kb.stores.find(store_id);
    if (it == kb.stores.end()) {
      throw Error(ErrorCode::kConfig, "stage '" + stage.id + "' attaches unknown store '" + store_id + "'");
    }
    const auto& store = *it->second;
    std::optional<EmbeddingVector> qv;
    if (kb.embedder && store.embedded_count() > 0 && !text::words(probe).empty()) qv = kb.embedder->embed(probe);
    auto result = store.retrieve(probe, qv ? &*qv : nullptr, kb.tau, kb.mode);
    if (store_id == "medications" && profile && !profile->allergies.empty()) {
      const auto terms = retrieval::index_terms(text::join(profile->allergies, " "), store.stopwords());
      auto slice = result.slice_ids;
      for (auto& id : retrieval::keyword_retrieve(terms, store.index(), retrieval::MatchMode::kAny)) {
        slice.push_back(std::move(id));
      }
      result = retrieval::fuse(std::move(slice), result.match, kb.tau);
    }
    StoreContext c{store_id, result, render_docs(store, result, kb.top_k)};
    out.push_back(std::move(c));
  }
  return out;
}

std::string concat_integrate(const std::string& initial,
                             const std::vector<std::pair<std::string, std::string>>& contributions) {
  if (contributions.empty()) return initial;
  return initial + "\n\n" + render_contributions(contributions);
}

std::string concat_synthesis(const std::vector<StageOutput>& outputs) { return render_prior_outputs(outputs); }

StageOutput run_stage(const StageSpec& stage, const StagePlan& plan, const StageInput& input,
                      const TemplateSet& templates, const gateway::Gateway& gateway, TraceLog& trace,
                      std::string_view session, const ProtocolOptions& options) {
  StageOutput out;
  out.stage = stage.id;
  out.title = stage.title;
  out.main_contact = stage.main_contact;
  auto values = base_values(input);

  const auto mc_system = system_for(plan, stage.main_contact, stage);
  auto mc = call_agent(gateway, trace, session, stage.id, EventKind::kMcCall, stage.main_contact, mc_system,
                       templates.get(stage.id, TemplateRole::kMain).render(values));
  out.initial = std::move(mc.reply);
  out.trace_seqs.push_back(mc.seq);
  values["initial_output"] = out.initial;

  const auto& supporter_template = templates.get(stage.id, TemplateRole::kSupporter);
  for (const auto& agent : plan.supporters(stage)) {
    auto c = call_agent(gateway, trace, session, stage.id, EventKind::kSupporterCall, agent,
                        system_for(plan, agent, stage), supporter_template.render(values));
    out.contributions.emplace_back(agent, std::move(c.reply));
    out.trace_seqs.push_back(c.seq);
  }
  values["contributions"] = render_contributions(out.contributions);

  if (options.decision_analysis) {
    auto integ = call_agent(gateway, trace, session, stage.id, EventKind::kIntegrate, stage.main_contact, mc_system,
                            templates.get(stage.id, TemplateRole::kIntegrate).render(values));
    out.integrated = std::move(integ.reply);
    out.trace_seqs.push_back(integ.seq);
  } else {
    out.integrated = concat_integrate(out.initial, out.contributions);
    out.trace_seqs.push_back(record_local(trace, session, stage.id, EventKind::kIntegrate,
                                          out.initial + "\n" + values["contributions"], out.integrated));
  }
  return out;
}

std::string synthesize(const std::vector<StageOutput>& outputs, std::string_view query, std::string_view profile,
                       const TemplateSet& templates, const gateway::Gateway& gateway, TraceLog& trace,
                       std::string_view session, const ProtocolOptions& options) {
  if (outputs.empty()) throw Error(ErrorCode::kInvalidArgument, "synthesize needs at least one stage output");
  if (!options.decision_analysis || !options.model_synthesis) {
    auto final_text = concat_synthesis(outputs);
    record_local(trace, session, "", EventKind::kSynthesize, render_prior_outputs(outputs), final_text);
    return final_text;
  }
  Values values{{"query", std::string(query)},
                {"prior_outputs", render_prior_outputs(outputs)},
                {"profile", profile.empty() ? std::string("(no profile)") : std::string(profile)}};
  auto c = call_agent(gateway, trace, session, "", EventKind::kSynthesize, std::string(kLocalAgent),
                      "You write the final consultation answer from the stage reports, in stage order.",
                      templates.synthesize().render(values));
  return c.reply;
}

}  // namespace medaide::coordinator
