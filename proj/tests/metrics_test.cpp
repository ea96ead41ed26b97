#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"
#include "medaide/eval/benchmark.hpp"
#include "medaide/eval/metrics.hpp"
#include "medaide/gateway/embedding.hpp"

using namespace medaide;
using namespace medaide::eval;
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

}  // namespace

TEST(Bleu, ClippedCounts) {
  const auto c = clipped_ngrams({"the", "the", "the"}, {"the", "cat"}, 1);
  EXPECT_EQ(c.matched, 1u);
  EXPECT_EQ(c.total, 3u);
  EXPECT_EQ(clipped_ngrams({"a"}, {"a"}, 2).total, 0u);
}

TEST(Bleu, BrevityPenalty) {
  // precision 1, c = 2, r = 4: BP = exp(1 - 4/2)
  EXPECT_NEAR(bleu_n("the cat", "the cat sat on", 1), 100.0 * std::exp(-1.0), 1e-9);
  EXPECT_NEAR(bleu_n("the cat", "the cat sat on", 2), 100.0 * std::exp(-1.0), 1e-9);
  EXPECT_DOUBLE_EQ(bleu_n("the cat sat on", "the cat sat on", 2), 100.0);
}

TEST(Bleu, CumulativeGeometricMean) {
  // 1-grams 4/4, 2-grams 1/3, no brevity penalty
  EXPECT_NEAR(bleu_n("a b c x", "a b x c", 2), 100.0 * std::sqrt(1.0 / 3.0), 1e-9);
  // 1-grams 3/4, 2-grams 1/3
  EXPECT_NEAR(bleu_n("a b c y", "a b x c", 2), 100.0 * std::sqrt(0.75 / 3.0), 1e-9);
  EXPECT_DOUBLE_EQ(bleu_n("x y", "a b", 1), 0.0);
  EXPECT_DOUBLE_EQ(bleu_n("", "a b", 1), 0.0);
  EXPECT_EQ(code_of([] { bleu_n("a", " ", 1); }), ErrorCode::kEmptyReference);
}

TEST(Gleu, FiveTokenHandValue) {
  // matched n-grams 4 + 2 + 1 + 0 of 14 on each side
  EXPECT_NEAR(gleu("a b c d e", "a b c x e"), 50.0, 1e-9);
  EXPECT_DOUBLE_EQ(gleu("a b c d e", "a b c d e"), 100.0);
}

TEST(RougeL, LcsFMeasure) {
  // LCS "a c d": P 3/4, R 3/5
  EXPECT_NEAR(rouge_l("a b c d", "a c d e f"), 100.0 * 2.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(rouge_l("p q", "a b"), 0.0);
}

TEST(Meteor, IdenticalFourTokens) {
  // one chunk over four matches: penalty 0.5 / 64
  EXPECT_DOUBLE_EQ(meteor_lite("a b c d", "a b c d"), 99.21875);
}

TEST(Meteor, FragmentedAlignment) {
  // every match its own chunk: penalty 0.5
  EXPECT_DOUBLE_EQ(meteor_lite("a b c d", "a c b d"), 50.0);
  // P 1/2, R 1: Fmean 10PR/(R+9P) = 5/5.5, one chunk of two
  EXPECT_NEAR(meteor_lite("a b x y", "a b"), 100.0 * (5.0 / 5.5) * (1.0 - 0.5 / 8.0), 1e-9);
  EXPECT_DOUBLE_EQ(meteor_lite("x y", "a b"), 0.0);
}

TEST(BertScore, OneHotVectors) {
  gateway::EmbeddingTable t(3);
  t.insert("a", {1, 0, 0});
  t.insert("b", {0, 1, 0});
  t.insert("c", {0, 0, 1});
  const gateway::FileEmbedder e(t);
  EXPECT_DOUBLE_EQ(bert_score_like("a b", "a b", e), 100.0);
  EXPECT_DOUBLE_EQ(bert_score_like("a", "b c", e), 0.0);
  // P 1, R 1/2
  EXPECT_NEAR(bert_score_like("a", "a b", e), 100.0 * 2.0 / 3.0, 1e-9);
}

TEST(Metrics, InvariantUnderTokenRenaming) {
  std::mt19937_64 rng(77);
  const std::vector<std::string> vocab = {"pain", "chest", "knee", "rest", "dose", "take", "fever", "the"};
  std::vector<std::string> renamed = {"w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8"};
  auto sentence = [&] {
    std::vector<std::size_t> idx(1 + rng() % 10);
    for (auto& i : idx) i = rng() % vocab.size();
    return idx;
  };
  auto render = [](const std::vector<std::size_t>& idx, const std::vector<std::string>& words) {
    std::vector<std::string> out;
    for (const auto i : idx) out.push_back(words[i]);
    return text::join(out, " ");
  };
  for (int n = 0; n < 200; ++n) {
    const auto c = sentence(), r = sentence();
    const auto c1 = render(c, vocab), r1 = render(r, vocab);
    const auto c2 = render(c, renamed), r2 = render(r, renamed);
    EXPECT_DOUBLE_EQ(bleu_n(c1, r1, 1), bleu_n(c2, r2, 1));
    EXPECT_DOUBLE_EQ(bleu_n(c1, r1, 2), bleu_n(c2, r2, 2));
    EXPECT_DOUBLE_EQ(rouge_l(c1, r1), rouge_l(c2, r2));
    EXPECT_DOUBLE_EQ(gleu(c1, r1), gleu(c2, r2));
    EXPECT_DOUBLE_EQ(meteor_lite(c1, r1), meteor_lite(c2, r2));
    for (const double s : {bleu_n(c1, r1, 2), rouge_l(c1, r1), gleu(c1, r1), meteor_lite(c1, r1)}) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 100.0);
    }
  }
}

TEST(Metrics, TokenizationIgnoresCaseAndPunctuation) {
  EXPECT_DOUBLE_EQ(rouge_l("Chest pain!", "chest, PAIN"), 100.0);
  EXPECT_DOUBLE_EQ(bleu_n("Chest pain!", "chest, PAIN", 2), 100.0);
}

TEST(IntentF1, ThreeInstanceHandValue) {
  // TP a, c; FP b; FN d, e: P 2/3, R 1/2
  const std::vector<std::set<std::string>> pred = {{"a", "b"}, {"c"}, {}};
  const std::vector<std::set<std::string>> gold = {{"a"}, {"c", "d"}, {"e"}};
  EXPECT_NEAR(intent_f1(pred, gold), 4.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(intent_f1({{}, {}}, {{}, {}}), 1.0);
  EXPECT_DOUBLE_EQ(intent_f1({{"a"}}, {{"b"}}), 0.0);
  EXPECT_EQ(code_of([] { intent_f1({{}}, {}); }), ErrorCode::kLengthMismatch);
}

TEST(Benchmark, FixtureLoadsAndValidates) {
  const auto b = load_benchmark(mt::data_dir() / "benchmark/fixture.jsonl");
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[2].id, "b3");
  EXPECT_FALSE(b[2].intents.empty());
  mt::TempDir dir;
  mt::write_text(dir / "dup.jsonl", R"({"id":"x","query":"q","reference":"r","intents":[]})" "\n"
                                    R"({"id":"x","query":"q","reference":"r","intents":[]})" "\n");
  EXPECT_EQ(code_of([&] { load_benchmark(dir / "dup.jsonl"); }), ErrorCode::kDuplicateId);
  mt::write_text(dir / "noref.jsonl", R"({"id":"x","query":"q","reference":"","intents":[]})" "\n");
  EXPECT_THROW(load_benchmark(dir / "noref.jsonl"), Error);
}

TEST(Benchmark, AblationMatrixCells) {
  const auto cells = load_ablation_matrix(mt::data_dir() / "ablation/matrix.json");
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].name, "full.4-stage");
  const auto sweep = load_ablation_matrix(mt::data_dir() / "ablation/stages.json");
  ASSERT_EQ(sweep.size(), 5u);
  EXPECT_EQ(sweep[4].name, "full.6-stage");
}
