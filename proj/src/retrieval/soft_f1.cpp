#include "medaide/retrieval/soft_f1.hpp"

#include <algorithm>
#include <map>

#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"

namespace medaide::retrieval {
namespace {

double mean_best(const std::vector<std::string>& from, const std::vector<std::string>& to,
                 const std::map<std::string, EmbeddingVector>& vecs) {
  double total = 0.0;
  for (const auto& a : from) {
    double best = 0.0;
    for (const auto& b : to) best = std::max(best, cosine(vecs.at(a), vecs.at(b)));
    total += best;
  }
  return total / static_cast<double>(from.size());
}

}  // namespace

SoftScore soft_score(std::string_view candidate, std::string_view reference, const gateway::Embedder& token_embedder) {
  const auto cand = text::words(candidate);
  const auto ref = text::words(reference);
  if (cand.empty() || ref.empty()) throw Error(ErrorCode::kEmptyText, "soft F-score needs at least one token per side");
  std::map<std::string, EmbeddingVector> vecs;
  for (const auto* side : {&cand, &ref}) {
    for (const auto& t : *side) {
      if (!vecs.count(t)) vecs.emplace(t, token_embedder.embed(t));
    }
  }
  SoftScore s;
  s.precision = std::clamp(mean_best(cand, ref, vecs), 0.0, 1.0);
  s.recall = std::clamp(mean_best(ref, cand, vecs), 0.0, 1.0);
  s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

double soft_f1(std::string_view candidate, std::string_view reference, const gateway::Embedder& token_embedder) {
  return soft_score(candidate, reference, token_embedder).f1;
}

}  // namespace medaide::retrieval
