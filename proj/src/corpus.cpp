#include "stylem/corpus.hpp"

#include <fstream>
#include <json.hpp>

#include "stylem/error.hpp"

namespace stylem {

using nlohmann::json;

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    case Split::unspecified: return "";
  }
  return "";
}

std::optional<Split> parse_split(std::string_view text) noexcept {
  if (text == "train") return Split::train;
  if (text == "val") return Split::val;
  if (text == "test") return Split::test;
  return std::nullopt;
}

std::string_view to_string(SplitFilter filter) noexcept {
  switch (filter) {
    case SplitFilter::train: return "train";
    case SplitFilter::val: return "val";
    case SplitFilter::test: return "test";
    case SplitFilter::all: return "all";
  }
  return "all";
}

std::optional<SplitFilter> parse_split_filter(std::string_view text) noexcept {
  if (text == "train") return SplitFilter::train;
  if (text == "val") return SplitFilter::val;
  if (text == "test") return SplitFilter::test;
  if (text == "all") return SplitFilter::all;
  return std::nullopt;
}

bool passes(SplitFilter filter, Split split) noexcept {
  switch (filter) {
    case SplitFilter::all: return true;
    case SplitFilter::train: return split == Split::train || split == Split::unspecified;
    case SplitFilter::val: return split == Split::val || split == Split::unspecified;
    case SplitFilter::test: return split == Split::test || split == Split::unspecified;
  }
  return false;
}

StyleRegistry::StyleRegistry(const std::vector<std::string>& names) {
  for (const auto& name : names) {
    if (find(name)) throw Error(ErrorKind::validation, "duplicate style '" + name + "' in registry");
    add(name);
  }
}

std::size_t StyleRegistry::add(const std::string& name) {
  if (name.empty()) throw Error(ErrorKind::validation, "style label must be non-empty");
  auto [it, inserted] = lookup_.try_emplace(name, names_.size());
  if (inserted) names_.push_back(name);
  return it->second;
}

std::optional<std::size_t> StyleRegistry::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t StyleRegistry::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw Error(ErrorKind::usage, "unknown style '" + std::string(name) + "'");
}

std::size_t Dataset::document_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : corpora) total += c.documents.size();
  return total;
}

Dataset group_by_style(std::vector<CaptionRecord> records) {
  Dataset ds;
  for (auto& rec : records) {
    const auto idx = ds.registry.add(rec.style);
    if (idx == ds.corpora.size()) ds.corpora.push_back(StyleCorpus{rec.style, {}});
    ds.corpora[idx].documents.push_back(std::move(rec));
  }
  return ds;
}

void validate_for_index(const Dataset& dataset) {
  if (dataset.registry.size() < 2) {
    throw Error(ErrorKind::validation,
                "fewer than 2 styles (found " + std::to_string(dataset.registry.size()) + ")");
  }
  for (const auto& corpus : dataset.corpora) {
    if (corpus.documents.empty()) {
      throw Error(ErrorKind::validation, "style '" + corpus.style + "' has no documents");
    }
  }
}

Dataset make_dataset(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::vector<CaptionRecord> records;
  records.reserve(rows.size());
  for (const auto& [style, caption] : rows) {
    records.push_back(CaptionRecord{style, caption, tokenize(caption), Split::unspecified, {}});
  }
  return group_by_style(std::move(records));
}

namespace {

std::string trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void row_error(ErrorKind kind, std::string_view source, std::size_t line, const std::string& what) {
  throw Error(kind, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

// Returns the string value of `key`, or nullopt if absent/null.
std::optional<std::string> string_field(const json& row, const char* key, std::string_view source,
                                        std::size_t line) {
  auto it = row.find(key);
  if (it == row.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  row_error(ErrorKind::parse, source, line, std::string("field '") + key + "' must be a string");
}

template <class OnRow>
void for_each_json_line(std::istream& in, std::string_view source, OnRow&& on_row) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    json row;
    try {
      row = json::parse(text);
    } catch (const json::parse_error& e) {
      row_error(ErrorKind::parse, source, line, std::string("malformed JSON: ") + e.what());
    }
    if (!row.is_object()) row_error(ErrorKind::parse, source, line, "expected a JSON object");
    on_row(row, line);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Dataset read_dataset(std::istream& in, SplitFilter filter, std::string_view source) {
  std::vector<CaptionRecord> records;
  std::size_t rows = 0;
  for_each_json_line(in, source, [&](const json& row, std::size_t line) {
    ++rows;
    auto style = string_field(row, "style", source, line);
    auto caption = string_field(row, "caption", source, line);
    if (!style || trim(*style).empty()) row_error(ErrorKind::parse, source, line, "missing or empty 'style'");
    if (!caption || trim(*caption).empty()) row_error(ErrorKind::parse, source, line, "missing or empty 'caption'");
    Split split = Split::unspecified;
    if (auto s = string_field(row, "split", source, line)) {
      auto parsed = parse_split(*s);
      if (!parsed) row_error(ErrorKind::parse, source, line, "unknown split '" + *s + "'");
      split = *parsed;
    }
    if (!passes(filter, split)) return;
    CaptionRecord rec;
    rec.style = trim(*style);
    rec.raw_text = std::move(*caption);
    rec.tokens = tokenize(rec.raw_text);
    rec.split = split;
    rec.image_id = string_field(row, "image_id", source, line).value_or("");
    records.push_back(std::move(rec));
  });
  if (rows == 0) throw Error(ErrorKind::validation, std::string(source) + ": dataset has zero rows");
  if (records.empty()) {
    throw Error(ErrorKind::validation,
                std::string(source) + ": no rows match split '" + std::string(to_string(filter)) + "'");
  }
  Dataset ds = group_by_style(std::move(records));
  if (ds.registry.size() < 2) {
    throw Error(ErrorKind::validation, std::string(source) + ": fewer than 2 styles (found " +
                                           std::to_string(ds.registry.size()) + ")");
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, SplitFilter filter) {
  auto in = open_input(path);
  return read_dataset(in, filter, path.string());
}

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats stats;
  for (const auto& corpus : dataset.corpora) {
    StyleStats s{corpus.style, corpus.documents.size(), 0};
    for (const auto& doc : corpus.documents) s.tokens += doc.tokens.size();
    stats.documents += s.documents;
    stats.tokens += s.tokens;
    stats.per_style.push_back(std::move(s));
  }
  return stats;
}

std::vector<CaptionRow> read_caption_rows(std::istream& in, std::string_view source) {
  std::vector<CaptionRow> out;
  for_each_json_line(in, source, [&](const json& row, std::size_t line) {
    CaptionRow r;
    r.line = line;
    auto caption = string_field(row, "caption", source, line);
    if (!caption) row_error(ErrorKind::parse, source, line, "missing 'caption'");
    r.caption = std::move(*caption);
    r.tokens = tokenize(r.caption);
    r.model = string_field(row, "model", source, line).value_or("");
    r.image_id = string_field(row, "image_id", source, line).value_or("");
    r.style = trim(string_field(row, "style", source, line).value_or(""));
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<CaptionRow> load_caption_rows(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_caption_rows(in, path.string());
}

}  // namespace stylem
