#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stylem/cng.hpp"
#include "stylem/text.hpp"

namespace stylem {

// Sparse n-gram vector sorted by key.
struct StyleWeightedVector {
  int order = 1;
  std::vector<std::pair<std::string, double>> entries;

  bool empty() const noexcept { return entries.empty(); }
  double norm() const;
};

// Mean over orders 1..4 of the mean CNG of the caption's n-grams (multiset)
// under `style`. An order with no n-grams contributes 0.
double only_style(const CngIndex& index, std::span<const Token> caption, std::size_t style);
double only_style(const CngIndex& index, std::span<const Token> caption, std::string_view style);

// Per-order OnlyStyle terms; only_style() is their mean.
std::array<double, kMaxOrder> only_style_orders(const CngIndex& index, std::span<const Token> caption,
                                                std::size_t style);

// OnlyStyle of a caption under every style, in registry order.
std::vector<double> only_style_all(const CngIndex& index, std::span<const Token> caption);

// One entry per distinct order-n n-gram, weighted by its CNG under `style`.
StyleWeightedVector style_vector(const CngIndex& index, std::span<const Token> caption, std::size_t style,
                                 int order);

// Cosine of two vectors of the same order; 0 when either has zero norm.
double cosine_similarity(const StyleWeightedVector& u, const StyleWeightedVector& v);

using StyleVectors = std::array<StyleWeightedVector, kMaxOrder>;

StyleVectors style_vectors(const CngIndex& index, std::span<const Token> caption, std::size_t style);

// Mean over orders of the cosine between precomputed vectors.
double mean_cosine(const StyleVectors& a, const StyleVectors& b);

double style_cider(const CngIndex& index, std::span<const Token> candidate, std::span<const Token> reference,
                   std::size_t style);
double style_cider(const CngIndex& index, std::span<const Token> candidate, std::span<const Token> reference,
                   std::string_view style);

// Document frequencies over a reference set, for TF-IDF weighted CIDEr.
class TfidfIndex {
 public:
  std::size_t documents() const noexcept { return documents_; }
  std::size_t df(int order, std::string_view key) const;
  // ln(N / df). Terms absent from the references are weighted as df = 1.
  double idf(int order, std::string_view key) const;

 private:
  friend TfidfIndex build_tfidf(std::span<const TokenSeq> references);

  std::size_t documents_ = 0;
  std::array<std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>, kMaxOrder> df_;
};

// Throws Error(usage) on an empty reference list.
TfidfIndex build_tfidf(std::span<const TokenSeq> references);

// Entry(t) = count of t in the caption * idf(t).
StyleWeightedVector tfidf_vector(const TfidfIndex& tfidf, std::span<const Token> caption, int order);

double cider(const TfidfIndex& tfidf, std::span<const Token> candidate, std::span<const Token> reference);

// Sufficient statistics for BLEU up to order 4: clipped matches, candidate
// n-gram totals, candidate length and effective reference length.
struct BleuStats {
  std::array<double, kMaxOrder> matches{};
  std::array<double, kMaxOrder> totals{};
  double candidate_length = 0;
  double reference_length = 0;

  BleuStats& operator+=(const BleuStats& other);
  double score(int max_order) const;
};

// The effective reference length is the one closest to the candidate
// length, preferring the shorter on ties.
BleuStats bleu_stats(std::span<const Token> candidate, std::span<const TokenSeq> references);

// Unsmoothed sentence BLEU with brevity penalty. 0 for an empty candidate.
double bleu(std::span<const Token> candidate, std::span<const TokenSeq> references, int max_order);

}  // namespace stylem
