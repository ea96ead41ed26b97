#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "medaide/common/error.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/gateway/mock.hpp"
#include "medaide/intent/matcher.hpp"
#include "medaide/intent/prototypes.hpp"
#include "medaide/intent/taxonomy.hpp"
#include "oracles.hpp"

using namespace medaide;
using namespace medaide::intent;
namespace mt = medaide::testing;

namespace {

const IntentTaxonomy& taxonomy() {
  static const IntentTaxonomy t = load_taxonomy(mt::data_dir() / "intents/taxonomy.jsonl");
  return t;
}

std::vector<double> uniform(std::size_t n, double p) { return std::vector<double>(n, p); }

EmbeddingVector random_vec(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n;
  EmbeddingVector v;
  for (std::size_t i = 0; i < dim; ++i) v.values.push_back(n(rng));
  return v;
}

PrototypeStore random_store(std::mt19937_64& rng, std::size_t dim) {
  std::vector<EmbeddingVector> vs;
  for (std::size_t i = 0; i < taxonomy().size(); ++i) vs.push_back(random_vec(rng, dim));
  return PrototypeStore(taxonomy(), vs);
}

gateway::Gateway mock_gateway(const std::string& reply) {
  gateway::MockScript s;
  s.rules.push_back({{}, reply});
  return gateway::Gateway(std::make_shared<gateway::MockChatBackend>(s), {});
}

}  // namespace

TEST(Taxonomy, ShippedSeventeenIntents) {
  const auto& t = taxonomy();
  ASSERT_EQ(t.size(), 17u);
  std::array<int, 4> per_stage{};
  for (const auto& i : t.intents()) ++per_stage[static_cast<int>(i.stage)];
  EXPECT_EQ(per_stage, (std::array<int, 4>{4, 6, 4, 3}));
  EXPECT_EQ(t.index_of(t.at(5).id), 5u);
  EXPECT_FALSE(t.contains("nope"));
  EXPECT_THROW(IntentTaxonomy({{"a", "A", CareStage::kDiagnosis}, {"a", "B", CareStage::kDiagnosis}}), Error);
  EXPECT_THROW(IntentTaxonomy(std::vector<Intent>{}), Error);
}

TEST(Softmax, UniformAndOneHot) {
  std::vector<double> sims(17, 0.3);
  for (const double p : softmax(sims)) EXPECT_NEAR(p, 1.0 / 17.0, 1e-15);
  std::vector<double> one_hot(17, 0.0);
  one_hot[4] = 1.0;
  const auto p = softmax(one_hot);
  EXPECT_NEAR(p[4], std::exp(1.0) / (std::exp(1.0) + 16.0), 1e-12);
  EXPECT_NEAR(p[4], 0.145221, 1e-6);
}

TEST(Softmax, SumsToOneAndShiftInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0), shift(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s(17);
    for (auto& x : s) x = u(rng);
    const auto p = softmax(s);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    const double c = shift(rng);
    auto shifted = s;
    for (auto& x : shifted) x += c;
    const auto q = softmax(shifted);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k], q[k], 1e-9);
  }
}

TEST(Activate, Examples) {
  const auto& t = taxonomy();
  std::vector<double> p(17, 0.8 / 16.0);
  p[3] = 0.2;
  EXPECT_EQ(activate(p, t, 0.0).activated.size(), 17u);

  const auto flat = activate(uniform(17, 1.0 / 17.0), t, 0.1);
  EXPECT_TRUE(flat.fallback_applied);
  EXPECT_EQ(flat.activated, std::vector<std::string>{t.at(0).id});

  const auto one = activate(p, t, 0.1);
  EXPECT_FALSE(one.fallback_applied);
  EXPECT_EQ(one.activated, std::vector<std::string>{t.at(3).id});
  EXPECT_DOUBLE_EQ(one.threshold_used, 0.1);

  EXPECT_THROW(activate(p, t, 1.0), Error);
  EXPECT_THROW(activate(p, t, -0.1), Error);
  EXPECT_THROW(activate(uniform(3, 0.3), t, 0.1), Error);
}

TEST(Activate, MonotoneAndNeverEmpty) {
  std::mt19937_64 rng(8);
  const auto store = random_store(rng, 32);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_vec(rng, 32);
    const auto dist = intent_distribution(q, store);
    for (double t1 = 0.0; t1 < 0.12; t1 += 0.01) {
      const auto a1 = activate(dist.probabilities, taxonomy(), t1);
      const auto a2 = activate(dist.probabilities, taxonomy(), t1 + 0.005);
      ASSERT_FALSE(a1.activated.empty());
      ASSERT_FALSE(a2.activated.empty());
      if (a1.fallback_applied || a2.fallback_applied) continue;
      for (const auto& id : a2.activated) {
        EXPECT_NE(std::find(a1.activated.begin(), a1.activated.end(), id), a1.activated.end());
      }
    }
  }
}

TEST(Match, ScaleInvariantAndEqualToOracle) {
  std::mt19937_64 rng(21);
  const auto store = random_store(rng, 24);
  std::vector<std::vector<double>> protos;
  for (const auto& v : store.vectors()) protos.push_back(v.values);
  for (int i = 0; i < 300; ++i) {
    const auto q = random_vec(rng, 24);
    const double threshold = (i % 4) * 0.03;
    const auto got = match_vector(q, store, taxonomy(), threshold);
    const auto want = oracle::ipm(q.values, protos, threshold);
    std::vector<std::string> want_ids;
    for (const auto k : want.activated) want_ids.push_back(taxonomy().at(k).id);
    EXPECT_EQ(got.activated, want_ids);
    for (std::size_t k = 0; k < protos.size(); ++k) {
      EXPECT_NEAR(got.similarities[k], want.similarities[k], 1e-9);
      EXPECT_NEAR(got.probabilities[k], want.probabilities[k], 1e-9);
      EXPECT_GT(got.probabilities[k], 0.0);
      EXPECT_LT(got.probabilities[k], 1.0);
    }
    auto scaled = q;
    const double s = 0.001 + static_cast<double>(rng() % 1000);
    for (auto& x : scaled.values) x *= s;
    const auto again = match_vector(scaled, store, taxonomy(), threshold);
    EXPECT_EQ(again.activated, got.activated);
    for (std::size_t k = 0; k < protos.size(); ++k) EXPECT_NEAR(again.probabilities[k], got.probabilities[k], 1e-9);
  }
}

TEST(Match, ExemplarTextPicksItsIntent) {
  const auto exemplars = load_exemplars(mt::data_dir() / "intents/exemplars.jsonl");
  ASSERT_EQ(exemplars.size(), 17u);
  gateway::EmbeddingTable table(48);
  gateway::HashEmbedder h(48, gateway::HashMode::kWholeText, 4);
  for (const auto& e : exemplars) table.insert(e.text, h.embed(e.text).values);
  gateway::FileEmbedder file(table);
  const auto store = prototypes_from_exemplars(taxonomy(), exemplars, file);
  for (const auto& e : exemplars) {
    const auto a = match(e.text, file, store, taxonomy(), 0.1);
    const auto k = *taxonomy().index_of(e.key);
    const auto best = std::max_element(a.probabilities.begin(), a.probabilities.end()) - a.probabilities.begin();
    EXPECT_EQ(static_cast<std::size_t>(best), k);
    EXPECT_NE(std::find(a.activated.begin(), a.activated.end(), e.key), a.activated.end());
  }
  try {
    match("", file, store, taxonomy(), 0.1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kEmptyInput);
  }
}

TEST(Prototypes, ValidationErrors) {
  gateway::EmbeddingTable table(2);
  table.insert(taxonomy().at(0).id, {1, 0});
  EXPECT_THROW(prototypes_from_table(taxonomy(), table), Error);
  std::vector<EmbeddingVector> vs(17, EmbeddingVector{{1, 0}, ""});
  vs[2].values = {0, 0};
  EXPECT_THROW(PrototypeStore(taxonomy(), vs), Error);
  vs[2].values = {1, 0, 0};
  EXPECT_THROW(PrototypeStore(taxonomy(), vs), Error);
  vs.pop_back();
  EXPECT_THROW(PrototypeStore(taxonomy(), vs), Error);
}

TEST(Smooth, LambdaBlend) {
  const EmbeddingVector prev{{1, 0}, ""}, cur{{0, 1}, ""};
  EXPECT_EQ(smooth(&prev, cur, 0.0).values, cur.values);
  EXPECT_EQ(smooth(nullptr, cur, 0.5).values, cur.values);
  const auto half = smooth(&prev, cur, 0.25);
  EXPECT_DOUBLE_EQ(half.values[0], 0.25);
  EXPECT_DOUBLE_EQ(half.values[1], 0.75);
}

TEST(Prompt, SingleIntentReply) {
  const auto gw = mock_gateway("diagnosis.disease_inquiry");
  const auto a = match_via_prompt("why does my chest hurt", taxonomy(), gw);
  EXPECT_EQ(a.activated, std::vector<std::string>{"diagnosis.disease_inquiry"});
  EXPECT_TRUE(a.synthetic);
  EXPECT_DOUBLE_EQ(a.probabilities[*taxonomy().index_of("diagnosis.disease_inquiry")], 1.0);
}

TEST(Prompt, ListedRepliesInTaxonomyOrder) {
  const auto& t = taxonomy();
  const auto ids = parse_recognition_reply(t.at(9).id + ",\n" + t.at(2).id + " " + t.at(9).id, t);
  EXPECT_EQ(ids, (std::vector<std::string>{t.at(2).id, t.at(9).id}));
}

TEST(Prompt, UnknownLabelIsUnparseable) {
  const auto gw = mock_gateway("diagnosis.astrology");
  try {
    match_via_prompt("q", taxonomy(), gw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnparseableReply);
    EXPECT_NE(e.detail().find("diagnosis.astrology"), std::string::npos);
  }
  EXPECT_THROW(parse_recognition_reply("  ,, ", taxonomy()), Error);
}

TEST(Prompt, RequestListsEveryIntent) {
  const auto gw = mock_gateway("x");
  const auto req = recognition_request("my knee hurts", taxonomy(), gw);
  std::string all;
  for (const auto& m : req.messages) all += m.content;
  for (const auto& i : taxonomy().intents()) EXPECT_NE(all.find(i.id), std::string::npos) << i.id;
  EXPECT_NE(all.find("my knee hurts"), std::string::npos);
}
