#pragma once

#include <string_view>

#include "medaide/gateway/embedding.hpp"

namespace medaide::retrieval {

struct SoftScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy token matching: precision averages, over candidate tokens, the best
// cosine to any reference token (floored at 0); recall is the mirror image.
// No idf weighting or baseline rescaling. Throws EmptyText.
SoftScore soft_score(std::string_view candidate, std::string_view reference, const gateway::Embedder& token_embedder);

double soft_f1(std::string_view candidate, std::string_view reference, const gateway::Embedder& token_embedder);

}  // namespace medaide::retrieval
