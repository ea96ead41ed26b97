#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/text.hpp"
#include "medaide/coordinator/plan.hpp"
#include "medaide/coordinator/profile.hpp"
#include "medaide/coordinator/protocol.hpp"
#include "medaide/coordinator/templates.hpp"
#include "medaide/coordinator/trace.hpp"
#include "medaide/gateway/mock.hpp"
#include "medaide/intent/taxonomy.hpp"
#include "medaide/retrieval/document.hpp"

using namespace medaide;
using namespace medaide::coordinator;
namespace mt = medaide::testing;

namespace {

const intent::IntentTaxonomy& taxonomy() {
  static const auto t = intent::load_taxonomy(mt::data_dir() / "intents/taxonomy.jsonl");
  return t;
}

StagePlan plan(int k) { return load_plan(mt::data_dir() / "plans" / (std::to_string(k) + "-stage.json"), taxonomy()); }

// Records every request, answers like the echo mock, and can fail on the nth call.
class Recorder final : public gateway::ChatBackend {
 public:
  std::vector<gateway::ChatRequest> requests;
  int fail_at = -1;
  gateway::ChatReply chat(const gateway::ChatRequest& r) override {
    requests.push_back(r);
    if (static_cast<int>(requests.size()) == fail_at) throw Error(ErrorCode::kTransport, "down");
    return {gateway::MockChatBackend::echo_reply(r, 12), "stop", {}};
  }
  std::string id() const override { return "recorder"; }
};

std::string user_text(const gateway::ChatRequest& r) {
  for (const auto& m : r.messages) {
    if (m.role == gateway::Role::kUser) return m.content;
  }
  return {};
}

StageInput input_for(const std::string& query) {
  StageInput in;
  in.query = query;
  in.elements = "(none extracted)";
  return in;
}

}  // namespace

TEST(Plan, ShippedPlansAreValid) {
  for (int k = 2; k <= 6; ++k) {
    const auto p = plan(k);
    EXPECT_EQ(p.granularity(), static_cast<std::size_t>(k));
    std::map<std::string, int> covered;
    for (const auto& s : p.stages)
      for (const auto& i : s.intents) ++covered[i];
    for (const auto& i : taxonomy().intents()) EXPECT_EQ(covered[i.id], 1) << k << " " << i.id;
    EXPECT_TRUE(std::is_sorted(p.agents.begin(), p.agents.end(),
                               [](const AgentSpec& a, const AgentSpec& b) { return a.id < b.id; }));
  }
  const auto four = plan(4);
  std::vector<std::string> ids;
  for (const auto& s : four.stages) ids.push_back(s.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"pre-diagnosis", "diagnosis", "medicament", "post-diagnosis"}));
}

TEST(Plan, ValidationRejectsBadPlans) {
  auto j = nlohmann::json::parse(mt::read_text(mt::data_dir() / "plans/4-stage.json"));
  auto missing = j;
  missing["stages"][0]["intents"].erase(0);
  EXPECT_THROW(validate_plan(plan_from_json(missing), taxonomy()), Error);
  auto twice = j;
  twice["stages"][1]["intents"].push_back(j["stages"][0]["intents"][0]);
  EXPECT_THROW(validate_plan(plan_from_json(twice), taxonomy()), Error);
  auto unknown = j;
  unknown["stages"][0]["intents"].push_back("pre_diagnosis.horoscope");
  EXPECT_THROW(validate_plan(plan_from_json(unknown), taxonomy()), Error);
  auto nobody = j;
  nobody["stages"][0]["main_contact"] = "ghost";
  EXPECT_THROW(validate_plan(plan_from_json(nobody), taxonomy()), Error);
  auto one = j;
  for (std::size_t i = 1; i < j["stages"].size(); ++i)
    for (const auto& x : j["stages"][i]["intents"]) one["stages"][0]["intents"].push_back(x);
  one["stages"] = nlohmann::json::array({one["stages"][0]});
  try {
    validate_plan(plan_from_json(one), taxonomy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(Plan, SupportersAreEveryoneElseInIdOrder) {
  const auto p = plan(4);
  const auto sup = p.supporters(*p.find_stage("medicament"));
  EXPECT_EQ(sup, (std::vector<std::string>{"diagnosis-agent", "post-diagnosis-agent", "pre-diagnosis-agent"}));
  EXPECT_EQ(p.find_stage("nope"), nullptr);
}

TEST(Plan, SelectedStagesMatchIntersectionOracle) {
  std::mt19937_64 rng(13);
  for (int k = 2; k <= 6; ++k) {
    const auto p = plan(k);
    for (int n = 0; n < 200; ++n) {
      intent::IntentActivation a;
      for (const auto& i : taxonomy().intents())
        if (rng() % 5 == 0) a.activated.push_back(i.id);
      std::vector<std::string> want;
      for (const auto& s : p.stages) {
        const bool hit = std::any_of(s.intents.begin(), s.intents.end(), [&](const std::string& i) {
          return std::find(a.activated.begin(), a.activated.end(), i) != a.activated.end();
        });
        if (hit) want.push_back(s.id);
      }
      EXPECT_EQ(plan_stages(a, p), want);
    }
  }
}

TEST(Templates, PlaceholdersAndErrors) {
  const PromptTemplate t("Q: {{query}} / {{profile}}");
  EXPECT_TRUE(t.uses("query"));
  EXPECT_FALSE(t.uses("context"));
  EXPECT_EQ(t.render({{"query", "why"}}), "Q: why / ");
  EXPECT_THROW(PromptTemplate("{{weather}}"), Error);
  EXPECT_THROW(PromptTemplate("{{query"), Error);

  mt::TempDir dir;
  for (const auto& f : std::filesystem::directory_iterator(mt::data_dir() / "templates"))
    std::filesystem::copy_file(f.path(), dir.path() / f.path().filename());
  const auto p = plan(4);
  EXPECT_NO_THROW(TemplateSet::load(dir.path(), p));
  mt::write_text(dir / "default.supporter.txt", "Help with {{query}}");
  try {
    TemplateSet::load(dir.path(), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }
}

TEST(Trace, JsonlRoundTripAndHash) {
  TraceLog log;
  TraceEvent e{"s1", "diagnosis", EventKind::kMcCall, "a", "rq", "rs", 0};
  EXPECT_EQ(log.append(e), 1u);
  e.session = "s2";
  EXPECT_EQ(log.append(e), 2u);
  const auto all = log.events();
  EXPECT_EQ(parse_trace_jsonl(to_jsonl(all)).size(), 2u);
  EXPECT_EQ(trace_hash(log.session("s1")), trace_hash(log.session("s2")));
  EXPECT_EQ(parse_event_kind(to_string(EventKind::kSupporterCall)), EventKind::kSupporterCall);
}

TEST(Protocol, StageArityAndVerbatimInitial) {
  const auto p = plan(4);
  const auto templates = TemplateSet::load(mt::data_dir() / "templates", p);
  auto rec = std::make_shared<Recorder>();
  const gateway::Gateway gw(rec, {});
  TraceLog log;
  const auto out = run_stage(*p.find_stage("diagnosis"), p, input_for("my  chest hurts"), templates, gw, log, "s");
  ASSERT_EQ(rec->requests.size(), 5u);  // mc, 3 supporters, integrate
  EXPECT_EQ(out.contributions.size(), 3u);
  EXPECT_EQ(out.trace_seqs.size(), 5u);
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_NE(user_text(rec->requests[i]).find(out.initial), std::string::npos);
  EXPECT_NE(user_text(rec->requests[4]).find(out.initial), std::string::npos);
  for (const auto& [agent, body] : out.contributions) EXPECT_NE(user_text(rec->requests[4]).find(body), std::string::npos);
  const auto ev = log.events();
  EXPECT_EQ(ev[0].kind, EventKind::kMcCall);
  EXPECT_EQ(ev[0].agent, "diagnosis-agent");
  EXPECT_EQ(ev[0].response_hash, sha256_hex(out.initial));
  EXPECT_EQ(ev[4].kind, EventKind::kIntegrate);
}

TEST(Protocol, FullSessionPassesTraceCheck) {
  const auto p = plan(4);
  const auto templates = TemplateSet::load(mt::data_dir() / "templates", p);
  auto rec = std::make_shared<Recorder>();
  const gateway::Gateway gw(rec, {});
  TraceLog log;
  std::vector<StageOutput> outs;
  for (const auto& s : {"pre-diagnosis", "medicament"}) {
    auto in = input_for("q");
    in.prior_outputs = outs;
    outs.push_back(run_stage(*p.find_stage(s), p, in, templates, gw, log, "s"));
  }
  const auto final_text = synthesize(outs, "q", "", templates, gw, log, "s");
  EXPECT_EQ(final_text, gateway::MockChatBackend::echo_reply(rec->requests.back(), 12));
  const auto ev = log.session("s");
  ASSERT_EQ(ev.size(), 11u);
  EXPECT_EQ(check_trace(ev, 4), std::nullopt);
  EXPECT_EQ(ev.back().agent, std::string(kLocalAgent));
  EXPECT_NE(user_text(rec->requests[5]).find(outs[0].integrated), std::string::npos);  // prior output reaches stage 2

  auto dropped = ev;
  dropped.erase(dropped.begin() + 2);
  EXPECT_TRUE(check_trace(dropped, 4).has_value());
  auto restaged = ev;
  restaged[3].stage = "medicament";
  EXPECT_TRUE(check_trace(restaged, 4).has_value());
  auto reordered = ev;
  std::swap(reordered[1].seq, reordered[2].seq);
  EXPECT_TRUE(check_trace(reordered, 4).has_value());
  EXPECT_TRUE(check_trace({ev.back()}, 4).has_value());
  EXPECT_TRUE(check_trace({}, 4).has_value());
}

TEST(Protocol, FailureKeepsEarlierEvents) {
  const auto p = plan(4);
  const auto templates = TemplateSet::load(mt::data_dir() / "templates", p);
  auto rec = std::make_shared<Recorder>();
  rec->fail_at = 3;
  const gateway::Gateway gw(rec, {});
  TraceLog log;
  try {
    run_stage(p.stages[0], p, input_for("q"), templates, gw, log, "s");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
  const auto ev = log.events();
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].kind, EventKind::kMcCall);
  EXPECT_EQ(ev[1].kind, EventKind::kSupporterCall);
}

TEST(Protocol, ConcatenationWithoutDecisionAnalysis) {
  const auto p = plan(2);
  const auto templates = TemplateSet::load(mt::data_dir() / "templates", p);
  auto rec = std::make_shared<Recorder>();
  const gateway::Gateway gw(rec, {});
  TraceLog log;
  ProtocolOptions off;
  off.decision_analysis = false;
  const auto out = run_stage(p.stages[0], p, input_for("q"), templates, gw, log, "s", off);
  EXPECT_EQ(rec->requests.size(), 2u);
  EXPECT_EQ(out.integrated, out.initial + "\n\n[" + out.contributions[0].first + "]\n" + out.contributions[0].second);
  const auto final_text = synthesize({out}, "q", "", templates, gw, log, "s", off);
  EXPECT_EQ(final_text, "## " + p.stages[0].title + "\n" + out.integrated);
  EXPECT_EQ(rec->requests.size(), 2u);
  EXPECT_EQ(log.events().back().agent, std::string(kLocalAgent));
  EXPECT_EQ(check_trace(log.events(), 2), std::nullopt);

  StageOutput a, b;
  a.title = "One";
  a.integrated = "x";
  b.title = "Two";
  b.integrated = "y";
  EXPECT_EQ(concat_synthesis({a, b}), "## One\nx\n\n## Two\ny");
  EXPECT_EQ(concat_integrate("i", {}), "i");
  EXPECT_THROW(synthesize({}, "q", "", templates, gw, log, "s"), Error);
}

TEST(Knowledge, AllergiesReachTheMedicationStore) {
  auto meds = std::make_shared<retrieval::DocumentStore>(
      "medications", retrieval::load_corpus(mt::data_dir() / "corpora/medications.jsonl", "medications"),
      retrieval::Stopwords::load(mt::data_dir() / "corpora/stopwords.txt"));
  KnowledgeBase kb;
  kb.stores["medications"] = meds;
  StageSpec stage;
  stage.id = "medicament";
  stage.stores = {"medications"};
  PatientProfile patient;
  patient.id = "p";
  patient.allergies = {"penicillin"};
  const auto without = stage_knowledge(stage, "knee swelling", {}, nullptr, kb);
  const auto with = stage_knowledge(stage, "knee swelling", {}, &patient, kb);
  auto has = [](const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  };
  EXPECT_FALSE(has(without[0].result.final_ids, "med-penicillin"));
  EXPECT_TRUE(has(with[0].result.final_ids, "med-penicillin"));
  EXPECT_NE(with[0].rendered.find("[medications/"), std::string::npos);
  stage.stores = {"cases"};
  EXPECT_THROW(stage_knowledge(stage, "q", {}, nullptr, kb), Error);
}

TEST(Profiles, UpsertGetAndManyIds) {
  mt::TempDir dir;
  ProfileStore store(dir.path());
  PatientProfile p;
  p.id = "p-1";
  p.demographics = {{"age", "40"}};
  p.allergies = {"latex"};
  p.visits = {{"2026-01-02", "checkup"}};
  store.upsert(p);
  EXPECT_EQ(store.get("p-1"), p);
  p.medications = {"metformin"};
  store.upsert(p);
  EXPECT_EQ(store.get("p-1").medications, std::vector<std::string>{"metformin"});
  try {
    store.get("p-2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(store.get("../etc"), Error);
  for (int i = 0; i < 100; ++i) {
    PatientProfile q;
    q.id = "x" + std::to_string(1000 + i);
    store.upsert(q);
  }
  EXPECT_EQ(store.ids().size(), 101u);
  EXPECT_TRUE(store.contains("x1050"));
  EXPECT_EQ(profile_from_json(to_json(p)), p);
  EXPECT_NE(render_profile(p).find("Allergies: latex"), std::string::npos);
}

TEST(Profiles, ShippedProfile) {
  ProfileStore store(mt::data_dir() / "profiles");
  const auto p = store.get("p001");
  EXPECT_EQ(p.allergies, (std::vector<std::string>{"penicillin", "aspirin"}));
  EXPECT_FALSE(valid_patient_id("a b"));
  EXPECT_FALSE(valid_patient_id(""));
}
