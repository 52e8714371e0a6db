#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "stylem/error.hpp"
#include "stylem/metrics.hpp"

namespace stylem {

namespace {

std::map<std::string, std::size_t> ngram_counts(std::span<const Token> tokens, int order) {
  std::map<std::string, std::size_t> counts;
  const auto len = static_cast<std::size_t>(order);
  std::string key;
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ngram_key(tokens, i, order, key);
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t i = 0; i < matches.size(); ++i) {
    matches[i] += other.matches[i];
    totals[i] += other.totals[i];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

double BleuStats::score(int max_order) const {
  check_order(max_order);
  if (candidate_length == 0) return 0.0;
  double log_precision = 0;
  for (int n = 0; n < max_order; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (totals[i] == 0 || matches[i] == 0) return 0.0;
    log_precision += std::log(matches[i] / totals[i]);
  }
  log_precision /= max_order;
  const double brevity = candidate_length < reference_length ? 1.0 - reference_length / candidate_length : 0.0;
  return std::exp(log_precision + brevity);
}

BleuStats bleu_stats(std::span<const Token> candidate, std::span<const TokenSeq> references) {
  if (references.empty()) throw Error(ErrorKind::usage, "BLEU needs at least one reference");
  BleuStats stats;
  stats.candidate_length = static_cast<double>(candidate.size());

  std::size_t best = references.front().size();
  for (const auto& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > candidate.size() ? len - candidate.size() : candidate.size() - len;
    };
    if (diff(ref.size()) < diff(best) || (diff(ref.size()) == diff(best) && ref.size() < best)) best = ref.size();
  }
  stats.reference_length = static_cast<double>(best);

  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    const auto cand = ngram_counts(candidate, n);
    std::map<std::string, std::size_t> max_ref;
    for (const auto& ref : references) {
      for (const auto& [key, count] : ngram_counts(ref, n)) {
        auto& m = max_ref[key];
        m = std::max(m, count);
      }
    }
    double clipped = 0;
    double total = 0;
    for (const auto& [key, count] : cand) {
      total += static_cast<double>(count);
      auto it = max_ref.find(key);
      if (it != max_ref.end()) clipped += static_cast<double>(std::min(count, it->second));
    }
    stats.matches[i] = clipped;
    stats.totals[i] = total;
  }
  return stats;
}

double bleu(std::span<const Token> candidate, std::span<const TokenSeq> references, int max_order) {
  return bleu_stats(candidate, references).score(max_order);
}

}  // namespace stylem
