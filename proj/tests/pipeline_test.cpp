#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"
#include "medaide/coordinator/trace.hpp"
#include "medaide/eval/benchmark.hpp"
#include "medaide/eval/metrics.hpp"
#include "medaide/gateway/http.hpp"
#include "medaide/pipeline/config.hpp"
#include "medaide/pipeline/engine.hpp"

using namespace medaide;
using namespace medaide::pipeline;
namespace mt = medaide::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

const char* kQuery = "Can I take ibuprofen with warfarin for my knee pain?";

}  // namespace

TEST(Config, ShippedFileLoads) {
  const auto c = load_config(mt::data_dir() / "medaide.ini");
  EXPECT_EQ(c.profile, BackendProfile::kReplay);
  EXPECT_EQ(c.stages, 4);
  EXPECT_EQ(c.stores.size(), 3u);
  const auto fp = c.fingerprint();
  EXPECT_EQ(fp["pipeline"]["stages"], 4);
  EXPECT_TRUE(std::filesystem::exists(c.plan_path()));
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
  mt::TempDir dir;
  EXPECT_EQ(code_of([&] { load_config(mt::write_config(dir.path(), {{"thresholds", {{"intnet", "0.1"}}}})); }),
            ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { load_config(mt::write_config(dir.path(), {{"extras", {{"x", "1"}}}})); }),
            ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { load_config(dir / "missing.ini"); }), ErrorCode::kConfig);
}

TEST(Config, RangeChecks) {
  mt::TempDir dir;
  const std::vector<mt::IniOverrides> bad = {
      {{"thresholds", {{"intent", "1.5"}}}},  {{"thresholds", {{"tau", "2"}}}},
      {{"pipeline", {{"stages", "7"}}}},      {{"thresholds", {{"max_sweeps", "0"}}}},
      {{"backend", {{"profile", "cloud"}}}},  {{"pipeline", {{"recognizer", "oracle"}}}},
      {{"thresholds", {{"overlap", "-1"}}}},  {{"backend", {{"parallelism", "0"}}}},
      {{"thresholds", {{"intent", "abc"}}}},  {{"paths", {{"grammar", "/nonexistent/g.cfg"}}}},
  };
  for (const auto& o : bad) {
    EXPECT_EQ(code_of([&] { load_config(mt::write_config(dir.path(), o)).validate(); }), ErrorCode::kConfig)
        << o.begin()->first << "." << o.begin()->second.begin()->first;
  }
}

TEST(Config, OverridesWin) {
  auto c = load_config(mt::data_dir() / "medaide.ini");
  ConfigOverrides o;
  o.stages = 2;
  o.threshold = 0.2;
  o.no_rie = true;
  o.recognizer = "prompt";
  o.seed = 99;
  apply_overrides(c, o);
  EXPECT_EQ(c.stages, 2);
  EXPECT_DOUBLE_EQ(c.intent_threshold, 0.2);
  EXPECT_TRUE(c.no_rie);
  EXPECT_EQ(c.fingerprint()["pipeline"]["recognizer"], "prompt");
  EXPECT_EQ(c.seed, 99u);
  o = {};
  o.stages = 9;
  EXPECT_EQ(code_of([&] { apply_overrides(c, o); }), ErrorCode::kConfig);
}

TEST(Engine, MockRunProducesAValidTrace) {
  mt::TempDir dir;
  const Engine engine(load_config(mt::write_config(dir.path(), mt::mock_profile())));
  const auto r = engine.run(kQuery);
  EXPECT_FALSE(r.final_text.empty());
  EXPECT_FALSE(r.planned_stages.empty());
  EXPECT_EQ(r.outputs.size(), r.planned_stages.size());
  EXPECT_EQ(coordinator::check_trace(r.trace, engine.plan().agents.size()), std::nullopt);
  EXPECT_EQ(r.trace_hash, coordinator::trace_hash(r.trace));
  EXPECT_TRUE(r.standardized.converged);
  EXPECT_GE(r.standardized.sweeps, 1);
  EXPECT_FALSE(r.refined.merged_text.empty());
  double total = 0.0;
  for (const double p : r.activation.probabilities) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);

  const auto again = engine.run(kQuery);
  EXPECT_EQ(again.final_text, r.final_text);
  EXPECT_EQ(again.trace_hash, r.trace_hash);
  EXPECT_EQ(again.session_id, r.session_id);
  RunContext other;
  other.salt = "turn-2";
  EXPECT_NE(engine.run(kQuery, other).session_id, r.session_id);
}

TEST(Engine, NoRieSkipsStandardization) {
  mt::TempDir dir;
  auto c = load_config(mt::write_config(dir.path(), mt::mock_profile()));
  c.no_rie = true;
  const Engine engine(c);
  const auto r = engine.run("  I'm worried   about my knee  ");
  EXPECT_EQ(r.standardized.sweeps, 0);
  EXPECT_EQ(r.standardized.text, "  I'm worried   about my knee  ");
  EXPECT_TRUE(r.elements.empty());
  EXPECT_TRUE(r.context.empty());
}

TEST(Engine, ReplayNeverTouchesTheNetwork) {
  mt::TempDir dir;
  const auto before = gateway::http_request_count();
  const Engine engine(load_config(mt::write_config(dir.path())));
  const auto r = engine.run(kQuery);
  EXPECT_FALSE(r.final_text.empty());
  EXPECT_EQ(gateway::http_request_count(), before);
  try {
    engine.run("a question nobody recorded");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReplayMiss);
  }
}

TEST(Bench, ReferencesEqualToOutputsScoreTheMaximum) {
  mt::TempDir dir;
  const Engine engine(load_config(mt::write_config(dir.path(), mt::mock_profile())));
  auto instances = eval::load_benchmark(mt::data_dir() / "benchmark/fixture.jsonl");
  for (auto& inst : instances) inst.reference = engine.run(inst.query).final_text;
  const auto report = eval::run_benchmark(instances, engine, 4);
  ASSERT_EQ(report.instances.size(), instances.size());
  for (const char* m : {"bleu1", "bleu2", "rouge_l", "gleu", "bert_score"}) EXPECT_NEAR(report.means.at(m), 100.0, 1e-9) << m;
  double meteor_sum = 0.0;
  for (const auto& inst : report.instances) {
    ASSERT_TRUE(inst.ok) << inst.error;
    const double m = static_cast<double>(text::words(inst.output).size());
    EXPECT_NEAR(inst.scores.at("meteor_lite"), 100.0 * (1.0 - 0.5 / (m * m * m)), 1e-9);
    meteor_sum += inst.scores.at("meteor_lite");
  }
  EXPECT_NEAR(report.means.at("meteor_lite"), meteor_sum / 5.0, 1e-9);
}

TEST(Bench, ReportIsByteIdenticalAcrossRunsAndThreadCounts) {
  mt::TempDir dir;
  const Engine engine(load_config(mt::write_config(dir.path())));
  const auto instances = eval::load_benchmark(mt::data_dir() / "benchmark/fixture.jsonl");
  const auto a = eval::report_to_json(eval::run_benchmark(instances, engine, 4)).dump(2);
  const auto b = eval::report_to_json(eval::run_benchmark(instances, engine, 1)).dump(2);
  EXPECT_EQ(a, b);
  const auto report = eval::run_benchmark(instances, engine, 2);
  EXPECT_TRUE(report.errors.empty());
  EXPECT_EQ(eval::report_table(report, "x"), eval::report_table(eval::run_benchmark(instances, engine, 3), "x"));
  EXPECT_EQ(report.fingerprint, engine.config().fingerprint());
}

TEST(Bench, InstanceFailuresAreTallied) {
  mt::TempDir dir;
  const Engine engine(load_config(mt::write_config(dir.path())));
  std::vector<eval::BenchmarkInstance> instances(2);
  instances[0] = {"ok", kQuery, "reference text", {}, ""};
  instances[1] = {"miss", "an unrecorded question", "reference text", {}, ""};
  const auto report = eval::run_benchmark(instances, engine, 2);
  EXPECT_TRUE(report.instances[0].ok);
  EXPECT_FALSE(report.instances[1].ok);
  EXPECT_EQ(report.errors.at("ReplayMiss"), 1u);
  EXPECT_NE(report.instances[1].error.find("ReplayMiss"), std::string::npos);
  instances[1].intents = {"diagnosis.astrology"};
  EXPECT_EQ(code_of([&] { eval::run_benchmark(instances, engine, 1); }), ErrorCode::kFormat);
}
