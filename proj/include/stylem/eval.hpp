#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stylem/cng.hpp"
#include "stylem/corpus.hpp"
#include "stylem/text.hpp"

namespace stylem {

// ---------------------------------------------------------------------------
// Ground-truth satisfaction protocol
//
// OnlyStyle: a caption with true style p satisfies the protocol when its
// OnlyStyle under p is strictly greater than under every compared style.
// StyleCIDEr: satisfied when the mean StyleCIDEr (under p) against the other
// captions of p strictly exceeds the mean against captions of the compared
// styles. Ties count as failures.
// ---------------------------------------------------------------------------

enum class Comparison { all_styles, sampled };

std::string_view to_string(Comparison comparison) noexcept;

struct GtOptions {
  bool onlystyle = true;
  bool stylecider = true;
  Comparison comparison = Comparison::all_styles;
  std::size_t k = 20;              // contrast styles per caption in sampled mode
  std::uint64_t seed = 0;
  std::size_t max_refs = 0;        // cap on each StyleCIDEr reference pool; 0 = no cap
  unsigned threads = 1;
};

struct GtStyleCounts {
  std::string style;
  std::size_t evaluated = 0;
  std::size_t satisfied = 0;
  std::size_t skipped = 0;
};

struct GtModeResult {
  std::size_t evaluated = 0;
  std::size_t satisfied = 0;
  std::size_t skipped = 0;
  std::vector<GtStyleCounts> per_style;  // dataset registry order

  double rate() const noexcept {
    return evaluated == 0 ? 0.0 : static_cast<double>(satisfied) / static_cast<double>(evaluated);
  }
};

struct GtProtocolResult {
  std::string dataset;
  std::optional<GtModeResult> onlystyle;
  std::optional<GtModeResult> stylecider;
};

// Every dataset style must be present in the index registry.
GtProtocolResult eval_ground_truth(const CngIndex& index, const Dataset& dataset, const GtOptions& options,
                                   std::string dataset_id = {});

// ---------------------------------------------------------------------------
// Model comparison over pre-generated captions
// ---------------------------------------------------------------------------

struct ModelEvalRow {
  std::string model;
  double bleu1 = 0;
  double bleu4 = 0;
  double cider = 0;
  double stylecider = 0;
  double onlystyle = 0;
  std::size_t generations = 0;
  std::size_t with_references = 0;  // generations used by reference-based columns
};

struct ModelEvalReport {
  std::vector<ModelEvalRow> rows;  // models in order of first appearance
  std::size_t references = 0;
  std::size_t unresolved = 0;      // generations without a matching reference
};

// Generations need `style` (the target style, present in the index) and are
// matched to references with the same `image_id` and `style`. Unmatched
// generations only contribute to OnlyStyle. Rows without `model` are grouped
// under "default".
ModelEvalReport eval_model_outputs(const CngIndex& index, std::span<const CaptionRow> generations,
                                   std::span<const CaptionRow> references, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Style retrieval
// ---------------------------------------------------------------------------

struct RetrievalRanking {
  TokenSeq caption;
  std::vector<std::pair<std::string, double>> ranked;  // descending; ties in registry order
  std::size_t target_rank = 0;                         // 1-based

  // Whether the target lies within the top ceil(fraction * styles) ranks.
  bool target_within(double fraction) const;
};

RetrievalRanking retrieval_rank(const CngIndex& index, std::span<const Token> caption, std::string_view target);

// ---------------------------------------------------------------------------
// CNG inspection
// ---------------------------------------------------------------------------

struct CngMatrix {
  std::vector<std::string> terms;   // normalized single tokens
  std::vector<std::string> styles;
  std::vector<std::vector<double>> values;  // values[term][style]
};

// Unigram CNG for each (term, style). An empty style list means all styles.
// Each raw term must tokenize to exactly one token.
CngMatrix cng_inspect(const CngIndex& index, std::span<const std::string> terms,
                      std::span<const std::string> styles);

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

struct Correlation {
  std::optional<double> pearson;   // nullopt when either input has zero variance
  std::optional<double> spearman;
};

// Ranks with ties given their average 1-based position.
std::vector<double> average_ranks(std::span<const double> values);
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Throws Error(usage) unless both lists have equal length >= 2.
Correlation rank_correlation(std::span<const double> metric_scores, std::span<const double> human_ranks);

}  // namespace stylem
