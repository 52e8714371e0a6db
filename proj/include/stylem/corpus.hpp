#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylem/text.hpp"

namespace stylem {

enum class Split { train, val, test, unspecified };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text) noexcept;

// Which rows of a dataset file to keep.
enum class SplitFilter { train, val, test, all };

std::string_view to_string(SplitFilter filter) noexcept;
std::optional<SplitFilter> parse_split_filter(std::string_view text) noexcept;

// Rows with no `split` field pass every filter.
bool passes(SplitFilter filter, Split split) noexcept;

// Ordered set of style labels. Index positions are stable and follow the
// order in which styles were first added.
class StyleRegistry {
 public:
  StyleRegistry() = default;
  explicit StyleRegistry(const std::vector<std::string>& names);

  // Returns the index of `name`, adding it if new. Throws on empty names.
  std::size_t add(const std::string& name);

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error(usage) naming the style when it is not registered.
  std::size_t index_of(std::string_view name) const;

  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  friend bool operator==(const StyleRegistry& a, const StyleRegistry& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct CaptionRecord {
  std::string style;
  std::string raw_text;
  TokenSeq tokens;
  Split split = Split::unspecified;
  std::string image_id;
};

struct StyleCorpus {
  std::string style;
  std::vector<CaptionRecord> documents;
};

// Style-labelled captions grouped per style; corpora[i] belongs to
// registry.name(i).
struct Dataset {
  StyleRegistry registry;
  std::vector<StyleCorpus> corpora;

  std::size_t document_count() const noexcept;
};

// Groups records by style in order of first appearance. Does not enforce the
// two-style minimum; see validate_for_index.
Dataset group_by_style(std::vector<CaptionRecord> records);

// Throws Error(validation) when the dataset has fewer than two styles or an
// empty style corpus.
void validate_for_index(const Dataset& dataset);

// Convenience for tests and tools: (style, caption) pairs, tokenized.
Dataset make_dataset(const std::vector<std::pair<std::string, std::string>>& rows);

// Reads a JSONL dataset: one object per line with required string keys
// `style` and `caption`, optional `image_id` and `split`. Blank lines are
// skipped. Style labels are trimmed; captions must be non-empty after
// trimming. Errors carry the 1-based line number.
Dataset read_dataset(std::istream& in, SplitFilter filter, std::string_view source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path, SplitFilter filter);

struct StyleStats {
  std::string style;
  std::size_t documents = 0;
  std::size_t tokens = 0;
};

struct DatasetStats {
  std::vector<StyleStats> per_style;
  std::size_t documents = 0;
  std::size_t tokens = 0;
  std::size_t styles() const noexcept { return per_style.size(); }
};

DatasetStats dataset_stats(const Dataset& dataset);

// Generic caption row used for model generations and reference files:
// `{"model": ..., "image_id": ..., "style": ..., "caption": ...}` where only
// `caption` is required.
struct CaptionRow {
  std::size_t line = 0;
  std::string model;
  std::string image_id;
  std::string style;
  std::string caption;
  TokenSeq tokens;
};

std::vector<CaptionRow> read_caption_rows(std::istream& in, std::string_view source = "<stream>");
std::vector<CaptionRow> load_caption_rows(const std::filesystem::path& path);

}  // namespace stylem
