#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "medaide/gateway/chat.hpp"
#include "medaide/gateway/embedding.hpp"
#include "medaide/intent/prototypes.hpp"
#include "medaide/intent/taxonomy.hpp"

namespace medaide::intent {

struct IntentDistribution {
  std::vector<double> similarities;
  std::vector<double> probabilities;
};

struct IntentActivation {
  std::vector<double> similarities;
  std::vector<double> probabilities;
  std::vector<std::string> activated;  // taxonomy order
  double threshold_used = 0.0;
  bool fallback_applied = false;
  // Set by the prompt recognizer: probabilities are uniform over the
  // activated set rather than a softmax.
  bool synthetic = false;
};

// Max-shifted softmax.
std::vector<double> softmax(const std::vector<double>& scores);

IntentDistribution intent_distribution(const EmbeddingVector& query_vec, const PrototypeStore& store);

// Intents with probability > threshold; argmax (lowest index on ties) when
// none qualifies. threshold must lie in [0, 1).
IntentActivation activate(const std::vector<double>& probabilities, const IntentTaxonomy& taxonomy, double threshold);

IntentActivation match_vector(const EmbeddingVector& query_vec, const PrototypeStore& store,
                              const IntentTaxonomy& taxonomy, double threshold);

IntentActivation match(std::string_view query, const gateway::Embedder& embedder, const PrototypeStore& store,
                       const IntentTaxonomy& taxonomy, double threshold);

// lambda * previous + (1 - lambda) * current. lambda = 0 returns current.
EmbeddingVector smooth(const EmbeddingVector* previous, const EmbeddingVector& current, double lambda);

// Classification prompt listing every intent id with its label.
gateway::ChatRequest recognition_request(std::string_view query, const IntentTaxonomy& taxonomy,
                                         const gateway::Gateway& gateway);

// Reply grammar: one or more known intent ids separated by commas, newlines
// or spaces. Anything else raises UnparseableReply carrying the raw text.
std::vector<std::string> parse_recognition_reply(std::string_view reply, const IntentTaxonomy& taxonomy);

IntentActivation match_via_prompt(std::string_view query, const IntentTaxonomy& taxonomy,
                                  const gateway::Gateway& gateway);

}  // namespace medaide::intent
