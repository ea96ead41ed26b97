#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medaide/gateway/embedding.hpp"

namespace medaide::eval {

// All text metrics tokenize with text::words and score on 0-100. An empty
// reference raises EmptyReference; an empty candidate scores 0.

struct ClippedCount {
  std::size_t matched = 0;
  std::size_t total = 0;  // candidate n-grams
};

ClippedCount clipped_ngrams(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                            std::size_t n);

// Geometric mean of clipped 1..n-gram precisions times the brevity penalty.
// Any zero precision makes the score 0.
double bleu_n(std::string_view candidate, std::string_view reference, int n);

// LCS F-measure with beta = 1.
double rouge_l(std::string_view candidate, std::string_view reference);

// min(precision, recall) over matched 1..4-grams pooled across orders.
double gleu(std::string_view candidate, std::string_view reference);

// Exact unigram alignment (each candidate token takes the earliest unused
// equal reference token), Fmean = 10PR / (R + 9P), penalty
// 0.5 * (chunks / matches)^3, score Fmean * (1 - penalty).
double meteor_lite(std::string_view candidate, std::string_view reference);

// soft_f1 * 100.
double bert_score_like(std::string_view candidate, std::string_view reference,
                       const gateway::Embedder& token_embedder);

// Micro F1 over multi-label sets. 1.0 when no instance has any label on
// either side. Throws LengthMismatch.
double intent_f1(const std::vector<std::set<std::string>>& predicted, const std::vector<std::set<std::string>>& gold);

}  // namespace medaide::eval
