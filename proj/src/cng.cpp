#include "stylem/cng.hpp"

#include <algorithm>
#include <limits>

#include "stylem/error.hpp"
#include "stylem/parallel.hpp"

namespace stylem {

std::uint32_t DocFreqTable::frequency(const Ngram& term) const {
  auto it = df.find(term.key());
  return it == df.end() ? 0 : it->second;
}

DocFreqTable doc_frequency(const StyleCorpus& corpus, int order) {
  check_order(order);
  DocFreqTable table;
  table.style = corpus.style;
  table.order = order;
  std::vector<std::string> seen;
  std::string key;
  for (const auto& doc : corpus.documents) {
    seen.clear();
    const std::span<const Token> tokens(doc.tokens);
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      ngram_key(tokens, i, order, key);
      seen.push_back(key);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto& k : seen) ++table.df[std::move(k)];
  }
  table.freq_list.reserve(table.df.size());
  for (const auto& [k, f] : table.df) table.freq_list.push_back(f);
  std::sort(table.freq_list.begin(), table.freq_list.end());
  return table;
}

double ecdf(std::span<const std::uint32_t> sorted_freqs, std::uint32_t f) {
  if (sorted_freqs.empty()) return 0.0;
  const auto at_most = std::upper_bound(sorted_freqs.begin(), sorted_freqs.end(), f) - sorted_freqs.begin();
  return static_cast<double>(at_most) / static_cast<double>(sorted_freqs.size());
}

// ---------------------------------------------------------------------------

std::optional<std::uint32_t> CngIndex::OrderTable::find(std::string_view key) const {
  auto it = ids.find(key);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

double CngIndex::OrderTable::score(std::uint32_t id, std::size_t style) const {
  const auto first = styles.begin() + offsets[id];
  const auto last = styles.begin() + offsets[id + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(style));
  if (it != last && *it == style) return scores[static_cast<std::size_t>(it - styles.begin())];
  return absent_scores[id];
}

void CngIndex::OrderTable::rebuild_lookup() {
  ids.clear();
  ids.reserve(terms.size());
  for (std::uint32_t i = 0; i < terms.size(); ++i) ids.emplace(terms[i], i);
}

CngIndex::CngIndex(StyleRegistry registry, std::array<OrderTable, kMaxOrder> orders, std::string split)
    : registry_(std::move(registry)), orders_(std::move(orders)), split_(std::move(split)) {}

double CngIndex::score(int n, std::string_view key, std::size_t style) const {
  const auto& table = order(n);
  auto id = table.find(key);
  return id ? table.score(*id, style) : 0.0;
}

std::uint32_t CngIndex::occur_num(int n, std::string_view key) const {
  const auto& table = order(n);
  auto id = table.find(key);
  return id ? table.occur_num(*id) : 0;
}

void CngIndex::score_row(int n, std::string_view key, std::span<double> out) const {
  const auto& table = order(n);
  auto id = table.find(key);
  if (!id) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  std::fill(out.begin(), out.end(), table.absent_scores[*id]);
  for (auto k = table.offsets[*id]; k < table.offsets[*id + 1]; ++k) out[table.styles[k]] = table.scores[k];
}

bool operator==(const CngIndex& a, const CngIndex& b) {
  if (!(a.registry_ == b.registry_) || a.tokenizer_ != b.tokenizer_ || a.split_ != b.split_) return false;
  for (std::size_t n = 0; n < a.orders_.size(); ++n) {
    const auto& x = a.orders_[n];
    const auto& y = b.orders_[n];
    if (x.terms != y.terms || x.offsets != y.offsets || x.styles != y.styles || x.scores != y.scores ||
        x.absent_scores != y.absent_scores) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

struct OrderBuild {
  CngIndex::OrderTable table;
  std::vector<std::size_t> distinct_per_style;
};

OrderBuild build_order(const Dataset& dataset, int order) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  const auto style_count = dataset.corpora.size();
  const auto n = static_cast<std::size_t>(order);

  OrderBuild out;
  auto& table = out.table;
  out.distinct_per_style.resize(style_count);

  struct Posting {
    std::uint32_t term;
    std::uint32_t style;
    double ecdf;
  };
  std::vector<Posting> postings;
  std::vector<std::uint32_t> last_style;  // per term: last style that touched it
  std::vector<std::uint32_t> df;          // per term: df within last_style
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> doc_terms;
  std::vector<std::uint32_t> freqs;
  std::string key;

  for (std::uint32_t s = 0; s < style_count; ++s) {
    touched.clear();
    for (const auto& doc : dataset.corpora[s].documents) {
      const std::span<const Token> tokens(doc.tokens);
      doc_terms.clear();
      for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        ngram_key(tokens, i, order, key);
        auto it = table.ids.find(std::string_view(key));
        if (it == table.ids.end()) {
          const auto id = static_cast<std::uint32_t>(table.terms.size());
          it = table.ids.emplace(key, id).first;
          table.terms.push_back(key);
          last_style.push_back(kNone);
          df.push_back(0);
        }
        doc_terms.push_back(it->second);
      }
      std::sort(doc_terms.begin(), doc_terms.end());
      doc_terms.erase(std::unique(doc_terms.begin(), doc_terms.end()), doc_terms.end());
      for (auto id : doc_terms) {
        if (last_style[id] != s) {
          last_style[id] = s;
          df[id] = 0;
          touched.push_back(id);
        }
        ++df[id];
      }
    }
    freqs.clear();
    for (auto id : touched) freqs.push_back(df[id]);
    std::sort(freqs.begin(), freqs.end());
    for (auto id : touched) postings.push_back(Posting{id, s, ecdf(freqs, df[id])});
    out.distinct_per_style[s] = touched.size();
  }

  // Group postings by term; styles stay ascending because postings were
  // appended style by style.
  const auto term_count = table.terms.size();
  table.offsets.assign(term_count + 1, 0);
  for (const auto& p : postings) ++table.offsets[p.term + 1];
  for (std::size_t t = 0; t < term_count; ++t) table.offsets[t + 1] += table.offsets[t];
  std::vector<double> ecdfs(postings.size());
  table.styles.resize(postings.size());
  {
    std::vector<std::uint32_t> cursor(table.offsets.begin(), table.offsets.end() - 1);
    for (const auto& p : postings) {
      const auto at = cursor[p.term]++;
      table.styles[at] = p.style;
      ecdfs[at] = p.ecdf;
    }
  }
  postings = {};

  // CNG_p = (1/|S|) * sum_{q != p} (E_p - E_q) / occur_num, with E = 0 for
  // styles whose corpus lacks the term.
  const double styles_d = static_cast<double>(style_count);
  table.scores.resize(table.styles.size());
  table.absent_scores.resize(term_count);
  for (std::size_t t = 0; t < term_count; ++t) {
    const auto first = table.offsets[t];
    const auto last = table.offsets[t + 1];
    const auto occ = last - first;
    const double denom = styles_d * static_cast<double>(occ);
    const double absent_styles = static_cast<double>(style_count - occ);
    double present_sum = 0;
    for (auto j = first; j < last; ++j) present_sum += ecdfs[j];
    for (auto i = first; i < last; ++i) {
      double num = 0;
      for (auto j = first; j < last; ++j) {
        if (j != i) num += ecdfs[i] - ecdfs[j];
      }
      num += absent_styles * ecdfs[i];
      table.scores[i] = num / denom;
    }
    table.absent_scores[t] = -present_sum / denom;
  }
  return out;
}

}  // namespace

CngIndex build_index(const Dataset& dataset, const BuildOptions& options, BuildLog* log) {
  validate_for_index(dataset);
  if (dataset.corpora.size() != dataset.registry.size()) {
    throw Error(ErrorKind::validation, "dataset corpora do not match its style registry");
  }
  for (std::size_t s = 0; s < dataset.corpora.size(); ++s) {
    if (dataset.corpora[s].style != dataset.registry.name(s)) {
      throw Error(ErrorKind::validation, "corpus order does not follow the style registry");
    }
  }

  std::array<OrderBuild, kMaxOrder> built;
  parallel_for(kMaxOrder, options.threads, [&](std::size_t i) { built[i] = build_order(dataset, static_cast<int>(i) + 1); });

  if (log) {
    log->entries.clear();
    log->warnings.clear();
    for (std::size_t s = 0; s < dataset.corpora.size(); ++s) {
      for (int n = 1; n <= kMaxOrder; ++n) {
        const auto distinct = built[static_cast<std::size_t>(n - 1)].distinct_per_style[s];
        log->entries.push_back(BuildLogEntry{dataset.corpora[s].style, n, dataset.corpora[s].documents.size(), distinct});
        if (distinct == 0) {
          log->warnings.push_back("style '" + dataset.corpora[s].style + "' has no " + std::to_string(n) +
                                  "-grams; its ECDF is 0 for every term of this order");
        }
      }
    }
    for (std::size_t i = 0; i < kMaxOrder; ++i) log->terms[i] = built[i].table.size();
  }

  std::array<CngIndex::OrderTable, kMaxOrder> orders;
  for (std::size_t i = 0; i < kMaxOrder; ++i) orders[i] = std::move(built[i].table);
  return CngIndex(dataset.registry, std::move(orders), options.split_label);
}

double cng_score(const CngIndex& index, const Ngram& term, std::string_view style) {
  return index.score(term.order(), term.key(), index.registry().index_of(style));
}

}  // namespace stylem
