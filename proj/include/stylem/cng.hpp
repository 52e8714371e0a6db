#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylem/corpus.hpp"
#include "stylem/text.hpp"

namespace stylem {

// Document frequencies of the order-n n-grams of one style corpus.
struct DocFreqTable {
  std::string style;
  int order = 1;
  std::unordered_map<std::string, std::uint32_t> df;  // keyed by Ngram::key()
  std::vector<std::uint32_t> freq_list;                // ascending, one per key

  std::uint32_t frequency(const Ngram& term) const;
};

// df(t) = number of documents containing t at least once.
DocFreqTable doc_frequency(const StyleCorpus& corpus, int order);

// Fraction of freq_list entries <= f. Zero for an empty list.
double ecdf(std::span<const std::uint32_t> sorted_freqs, std::uint32_t f);
inline double ecdf(const DocFreqTable& table, std::uint32_t f) { return ecdf(table.freq_list, f); }

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

// Contrastive n-gram scores for every n-gram observed in any style corpus.
//
// Storage is sparse: for a term, the styles whose corpus contains it are kept
// in ascending registry order with their scores; every other style shares a
// single score (the term's ECDF there is zero, so its contrast against the
// present styles is the same for all of them).
class CngIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  struct OrderTable {
    std::vector<std::string> terms;
    std::vector<std::uint32_t> offsets;    // terms.size() + 1 entries into styles/scores
    std::vector<std::uint32_t> styles;     // ascending within each term
    std::vector<double> scores;
    std::vector<double> absent_scores;     // one per term
    std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ids;

    std::size_t size() const noexcept { return terms.size(); }
    std::optional<std::uint32_t> find(std::string_view key) const;
    std::uint32_t occur_num(std::uint32_t id) const { return offsets[id + 1] - offsets[id]; }
    double score(std::uint32_t id, std::size_t style) const;
    void rebuild_lookup();
  };

  CngIndex() = default;
  CngIndex(StyleRegistry registry, std::array<OrderTable, kMaxOrder> orders, std::string split);

  const StyleRegistry& registry() const noexcept { return registry_; }
  std::size_t style_count() const noexcept { return registry_.size(); }
  const OrderTable& order(int n) const { return orders_.at(static_cast<std::size_t>(n - 1)); }
  const std::string& tokenizer_id() const noexcept { return tokenizer_; }
  const std::string& split() const noexcept { return split_; }

  // CNG of the order-n term whose key is `key`, or 0 for an unseen term.
  double score(int n, std::string_view key, std::size_t style) const;
  // Number of styles whose corpus contains the term (0 if unseen).
  std::uint32_t occur_num(int n, std::string_view key) const;

  // Writes CNG of the term for every style, in registry order.
  void score_row(int n, std::string_view key, std::span<double> out) const;

  friend bool operator==(const CngIndex& a, const CngIndex& b);

 private:
  friend CngIndex read_index(std::istream&);

  StyleRegistry registry_;
  std::array<OrderTable, kMaxOrder> orders_;
  std::string tokenizer_{kTokenizerId};
  std::string split_;
};

struct BuildLogEntry {
  std::string style;
  int order = 1;
  std::size_t documents = 0;
  std::size_t distinct_ngrams = 0;
};

struct BuildLog {
  std::vector<BuildLogEntry> entries;  // style-major, order-minor
  std::array<std::size_t, kMaxOrder> terms{};
  // "style <name> has no <n>-grams" and similar notices.
  std::vector<std::string> warnings;
};

struct BuildOptions {
  unsigned threads = 1;
  std::string split_label = "all";  // recorded in the index manifest
};

// Requires >= 2 styles and non-empty corpora. Output is independent of
// `options.threads`.
CngIndex build_index(const Dataset& dataset, const BuildOptions& options = {}, BuildLog* log = nullptr);

// Resolves a style name and looks up the score of `term`.
double cng_score(const CngIndex& index, const Ngram& term, std::string_view style);

void write_index(const CngIndex& index, std::ostream& out);
CngIndex read_index(std::istream& in);
void save_index(const CngIndex& index, const std::filesystem::path& path);
CngIndex load_index(const std::filesystem::path& path);

}  // namespace stylem
