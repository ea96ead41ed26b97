#include "medaide/intent/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"

namespace medaide::intent {

std::vector<double> softmax(const std::vector<double>& scores) {
  if (scores.empty()) return {};
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - top);
    total += out[i];
  }
  for (auto& p : out) p /= total;
  return out;
}

IntentDistribution intent_distribution(const EmbeddingVector& query_vec, const PrototypeStore& store) {
  IntentDistribution d;
  d.similarities.reserve(store.size());
  for (const auto& proto : store.vectors()) d.similarities.push_back(cosine(query_vec, proto));
  d.probabilities = softmax(d.similarities);
  return d;
}

IntentActivation activate(const std::vector<double>& probabilities, const IntentTaxonomy& taxonomy, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "intent threshold must lie in [0, 1)");
  }
  if (probabilities.size() != taxonomy.size()) {
    throw Error(ErrorCode::kLengthMismatch, "probability vector does not match taxonomy size");
  }
  IntentActivation a;
  a.probabilities = probabilities;
  a.threshold_used = threshold;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > threshold) a.activated.push_back(taxonomy.at(i).id);
  }
  if (a.activated.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < probabilities.size(); ++i) {
      if (probabilities[i] > probabilities[best]) best = i;
    }
    a.activated.push_back(taxonomy.at(best).id);
    a.fallback_applied = true;
  }
  return a;
}

IntentActivation match_vector(const EmbeddingVector& query_vec, const PrototypeStore& store,
                              const IntentTaxonomy& taxonomy, double threshold) {
  auto d = intent_distribution(query_vec, store);
  auto a = activate(d.probabilities, taxonomy, threshold);
  a.similarities = std::move(d.similarities);
  return a;
}

IntentActivation match(std::string_view query, const gateway::Embedder& embedder, const PrototypeStore& store,
                       const IntentTaxonomy& taxonomy, double threshold) {
  return match_vector(embedder.embed(query), store, taxonomy, threshold);
}

EmbeddingVector smooth(const EmbeddingVector* previous, const EmbeddingVector& current, double lambda) {
  if (!previous || lambda == 0.0) return current;
  if (!(lambda >= 0.0 && lambda < 1.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1)");
  if (previous->dimension() != current.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot smooth vectors of different dimension");
  }
  EmbeddingVector out{std::vector<double>(current.dimension()), current.source};
  for (std::size_t i = 0; i < current.dimension(); ++i) {
    out.values[i] = lambda * previous->values[i] + (1.0 - lambda) * current.values[i];
  }
  return out;
}

gateway::ChatRequest recognition_request(std::string_view query, const IntentTaxonomy& taxonomy,
                                         const gateway::Gateway& gateway) {
  std::string system =
      "You are a medical intent classifier. Answer with the ids of every intent the query expresses, "
      "separated by commas, and nothing else.";
  std::string user = "Intents:\n";
  for (const auto& i : taxonomy.intents()) user += "- " + i.id + ": " + i.label + "\n";
  user += "\nQuery: ";
  user += query;
  return gateway.make_request(system, user);
}

std::vector<std::string> parse_recognition_reply(std::string_view reply, const IntentTaxonomy& taxonomy) {
  std::set<std::size_t> picked;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    const auto idx = taxonomy.index_of(current);
    if (!idx) {
      throw Error(ErrorCode::kUnparseableReply,
                  "unknown intent '" + current + "' in reply: " + std::string(reply));
    }
    picked.insert(*idx);
    current.clear();
  };
  for (const char c : reply) {
    if (c == ',' || text::is_space_byte(static_cast<unsigned char>(c))) {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  if (picked.empty()) throw Error(ErrorCode::kUnparseableReply, "no intents in reply: " + std::string(reply));
  std::vector<std::string> out;
  for (const auto i : picked) out.push_back(taxonomy.at(i).id);
  return out;
}

IntentActivation match_via_prompt(std::string_view query, const IntentTaxonomy& taxonomy,
                                  const gateway::Gateway& gateway) {
  const auto reply = gateway.send(recognition_request(query, taxonomy, gateway));
  IntentActivation a;
  a.activated = parse_recognition_reply(reply.content, taxonomy);
  a.synthetic = true;
  a.similarities.assign(taxonomy.size(), 0.0);
  a.probabilities.assign(taxonomy.size(), 0.0);
  const double share = 1.0 / static_cast<double>(a.activated.size());
  for (const auto& id : a.activated) a.probabilities[*taxonomy.index_of(id)] = share;
  return a;
}

}  // namespace medaide::intent
