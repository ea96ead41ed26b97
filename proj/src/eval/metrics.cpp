#include "medaide/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "medaide/common/error.hpp"
#include "medaide/common/text.hpp"
#include "medaide/retrieval/soft_f1.hpp"

namespace medaide::eval {
namespace {

using Tokens = std::vector<std::string>;

Tokens reference_tokens(std::string_view reference) {
  auto r = text::words(reference);
  if (r.empty()) throw Error(ErrorCode::kEmptyReference, "reference has no tokens");
  return r;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(const Tokens& t, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + i, t.begin() + i + n)];
  return out;
}

}  // namespace

ClippedCount clipped_ngrams(const Tokens& candidate, const Tokens& reference, std::size_t n) {
  ClippedCount c;
  if (n == 0 || candidate.size() < n) return c;
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  for (const auto& [gram, count] : cand) {
    c.total += count;
    const auto it = ref.find(gram);
    if (it != ref.end()) c.matched += std::min(count, it->second);
  }
  return c;
}

double bleu_n(std::string_view candidate, std::string_view reference, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "BLEU order must be positive");
  const auto ref = reference_tokens(reference);
  const auto cand = text::words(candidate);
  if (cand.empty()) return 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto c = clipped_ngrams(cand, ref, static_cast<std::size_t>(k));
    if (c.matched == 0) return 0.0;
    log_sum += std::log(static_cast<double>(c.matched) / static_cast<double>(c.total));
  }
  const double c_len = static_cast<double>(cand.size());
  const double r_len = static_cast<double>(ref.size());
  const double bp = c_len > r_len ? 1.0 : std::exp(1.0 - r_len / c_len);
  return 100.0 * bp * std::exp(log_sum / n);
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  const auto ref = reference_tokens(reference);
  const auto cand = text::words(candidate);
  if (cand.empty()) return 0.0;
  std::vector<std::size_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= cand.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[ref.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(cand.size());
  const double r = lcs / static_cast<double>(ref.size());
  return 100.0 * 2.0 * p * r / (p + r);
}

double gleu(std::string_view candidate, std::string_view reference) {
  const auto ref = reference_tokens(reference);
  const auto cand = text::words(candidate);
  if (cand.empty()) return 0.0;
  std::size_t matched = 0, cand_total = 0, ref_total = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto c = clipped_ngrams(cand, ref, n);
    matched += c.matched;
    cand_total += c.total;
    if (ref.size() >= n) ref_total += ref.size() - n + 1;
  }
  if (matched == 0) return 0.0;
  const double p = static_cast<double>(matched) / static_cast<double>(cand_total);
  const double r = static_cast<double>(matched) / static_cast<double>(ref_total);
  return 100.0 * std::min(p, r);
}

double meteor_lite(std::string_view candidate, std::string_view reference) {
  const auto ref = reference_tokens(reference);
  const auto cand = text::words(candidate);
  if (cand.empty()) return 0.0;
  std::vector<bool> used(ref.size(), false);
  std::vector<long> align(cand.size(), -1);
  std::size_t m = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!used[j] && ref[j] == cand[i]) {
        used[j] = true;
        align[i] = static_cast<long>(j);
        ++m;
        break;
      }
    }
  }
  if (m == 0) return 0.0;
  std::size_t chunks = 0;
  long last = -2;
  bool in_chunk = false;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (align[i] < 0) {
      in_chunk = false;
      continue;
    }
    if (!in_chunk || align[i] != last + 1) ++chunks;
    in_chunk = true;
    last = align[i];
  }
  const double p = static_cast<double>(m) / static_cast<double>(cand.size());
  const double r = static_cast<double>(m) / static_cast<double>(ref.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / static_cast<double>(m);
  const double penalty = 0.5 * frag * frag * frag;
  return 100.0 * fmean * (1.0 - penalty);
}

double bert_score_like(std::string_view candidate, std::string_view reference,
                       const gateway::Embedder& token_embedder) {
  return 100.0 * retrieval::soft_f1(candidate, reference, token_embedder);
}

double intent_f1(const std::vector<std::set<std::string>>& predicted, const std::vector<std::set<std::string>>& gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predicted and gold lists differ in length");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto& p : predicted[i]) (gold[i].count(p) ? tp : fp) += 1;
    for (const auto& g : gold[i]) fn += predicted[i].count(g) ? 0 : 1;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace medaide::eval
