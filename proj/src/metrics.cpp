#include "stylem/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "stylem/error.hpp"

namespace stylem {

double StyleWeightedVector::norm() const {
  double sq = 0;
  for (const auto& [k, w] : entries) sq += w * w;
  return std::sqrt(sq);
}

std::array<double, kMaxOrder> only_style_orders(const CngIndex& index, std::span<const Token> caption,
                                                std::size_t style) {
  if (style >= index.style_count()) throw Error(ErrorKind::usage, "style index out of range");
  std::array<double, kMaxOrder> per_order{};
  std::string key;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto len = static_cast<std::size_t>(n);
    if (caption.size() < len) continue;
    const auto& table = index.order(n);
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + len <= caption.size(); ++i, ++count) {
      ngram_key(caption, i, n, key);
      if (auto id = table.find(key)) sum += table.score(*id, style);
    }
    per_order[static_cast<std::size_t>(n - 1)] = sum / static_cast<double>(count);
  }
  return per_order;
}

namespace {

double mean_of_orders(const std::array<double, kMaxOrder>& v) {
  double total = 0;
  for (double x : v) total += x;
  return total / kMaxOrder;
}

}  // namespace

double only_style(const CngIndex& index, std::span<const Token> caption, std::size_t style) {
  return mean_of_orders(only_style_orders(index, caption, style));
}

double only_style(const CngIndex& index, std::span<const Token> caption, std::string_view style) {
  return only_style(index, caption, index.registry().index_of(style));
}

std::vector<double> only_style_all(const CngIndex& index, std::span<const Token> caption) {
  const auto styles = index.style_count();
  std::vector<std::array<double, kMaxOrder>> per_order(styles);
  std::vector<double> sums(styles);
  std::vector<double> row(styles);
  std::string key;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto len = static_cast<std::size_t>(n);
    if (caption.size() < len) continue;
    const auto& table = index.order(n);
    std::fill(sums.begin(), sums.end(), 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i + len <= caption.size(); ++i, ++count) {
      ngram_key(caption, i, n, key);
      auto id = table.find(key);
      if (!id) continue;
      for (std::size_t s = 0; s < styles; ++s) sums[s] += table.score(*id, s);
    }
    for (std::size_t s = 0; s < styles; ++s) {
      per_order[s][static_cast<std::size_t>(n - 1)] = sums[s] / static_cast<double>(count);
    }
  }
  std::vector<double> out(styles);
  for (std::size_t s = 0; s < styles; ++s) out[s] = mean_of_orders(per_order[s]);
  return out;
}

namespace {

// Distinct order-n keys of a caption with their multiplicities, key-sorted.
std::vector<std::pair<std::string, std::size_t>> counted_ngrams(std::span<const Token> caption, int order) {
  check_order(order);
  std::vector<std::string> keys;
  const auto len = static_cast<std::size_t>(order);
  std::string key;
  for (std::size_t i = 0; i + len <= caption.size(); ++i) {
    ngram_key(caption, i, order, key);
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::string, std::size_t>> out;
  for (auto& k : keys) {
    if (!out.empty() && out.back().first == k) {
      ++out.back().second;
    } else {
      out.emplace_back(std::move(k), 1);
    }
  }
  return out;
}

}  // namespace

StyleWeightedVector style_vector(const CngIndex& index, std::span<const Token> caption, std::size_t style,
                                 int order) {
  if (style >= index.style_count()) throw Error(ErrorKind::usage, "style index out of range");
  StyleWeightedVector v;
  v.order = order;
  for (auto& [key, count] : counted_ngrams(caption, order)) {
    const double w = index.score(order, key, style);
    v.entries.emplace_back(std::move(key), w);
  }
  return v;
}

double cosine_similarity(const StyleWeightedVector& u, const StyleWeightedVector& v) {
  if (u.order != v.order) {
    throw Error(ErrorKind::usage, "cosine of vectors with different orders (" + std::to_string(u.order) + " vs " +
                                      std::to_string(v.order) + ")");
  }
  double dot = 0;
  double nu = 0;
  double nv = 0;
  for (const auto& e : u.entries) nu += e.second * e.second;
  for (const auto& e : v.entries) nv += e.second * e.second;
  if (nu == 0 || nv == 0) return 0.0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    const int c = a->first.compare(b->first);
    if (c < 0) {
      ++a;
    } else if (c > 0) {
      ++b;
    } else {
      dot += a->second * b->second;
      ++a;
      ++b;
    }
  }
  // Cauchy-Schwarz holds exactly; rounding may not.
  return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

StyleVectors style_vectors(const CngIndex& index, std::span<const Token> caption, std::size_t style) {
  StyleVectors out;
  for (int n = 1; n <= kMaxOrder; ++n) out[static_cast<std::size_t>(n - 1)] = style_vector(index, caption, style, n);
  return out;
}

double mean_cosine(const StyleVectors& a, const StyleVectors& b) {
  double total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += cosine_similarity(a[i], b[i]);
  return total / kMaxOrder;
}

double style_cider(const CngIndex& index, std::span<const Token> candidate, std::span<const Token> reference,
                   std::size_t style) {
  return mean_cosine(style_vectors(index, candidate, style), style_vectors(index, reference, style));
}

double style_cider(const CngIndex& index, std::span<const Token> candidate, std::span<const Token> reference,
                   std::string_view style) {
  return style_cider(index, candidate, reference, index.registry().index_of(style));
}

// ---------------------------------------------------------------------------

std::size_t TfidfIndex::df(int order, std::string_view key) const {
  check_order(order);
  const auto& table = df_[static_cast<std::size_t>(order - 1)];
  auto it = table.find(key);
  return it == table.end() ? 0 : it->second;
}

double TfidfIndex::idf(int order, std::string_view key) const {
  const auto f = std::max<std::size_t>(1, df(order, key));
  return std::log(static_cast<double>(documents_) / static_cast<double>(f));
}

TfidfIndex build_tfidf(std::span<const TokenSeq> references) {
  if (references.empty()) throw Error(ErrorKind::usage, "TF-IDF needs at least one reference");
  TfidfIndex index;
  index.documents_ = references.size();
  for (const auto& ref : references) {
    for (int n = 1; n <= kMaxOrder; ++n) {
      auto& table = index.df_[static_cast<std::size_t>(n - 1)];
      for (auto& [key, count] : counted_ngrams(ref, n)) ++table[std::move(key)];
    }
  }
  return index;
}

StyleWeightedVector tfidf_vector(const TfidfIndex& tfidf, std::span<const Token> caption, int order) {
  StyleWeightedVector v;
  v.order = order;
  for (auto& [key, count] : counted_ngrams(caption, order)) {
    const double w = static_cast<double>(count) * tfidf.idf(order, key);
    v.entries.emplace_back(std::move(key), w);
  }
  return v;
}

double cider(const TfidfIndex& tfidf, std::span<const Token> candidate, std::span<const Token> reference) {
  double total = 0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    total += cosine_similarity(tfidf_vector(tfidf, candidate, n), tfidf_vector(tfidf, reference, n));
  }
  return total / kMaxOrder;
}

}  // namespace stylem
