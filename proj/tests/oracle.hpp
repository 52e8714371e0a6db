#pragma once

// Brute-force evaluators used as test oracles. Everything here is written
// with direct nested loops over raw token lists: no hashing, no sorting, no
// shared code with the library's index path.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using Doc = std::vector<std::string>;
using Term = std::vector<std::string>;

struct Corpora {
  std::vector<std::string> styles;
  std::vector<std::vector<Doc>> docs;  // docs[style]
};

inline std::vector<Term> windows(const Doc& doc, int n) {
  std::vector<Term> out;
  for (int i = 0; i + n <= static_cast<int>(doc.size()); ++i) {
    Term t;
    for (int k = 0; k < n; ++k) t.push_back(doc[static_cast<std::size_t>(i + k)]);
    out.push_back(t);
  }
  return out;
}

inline bool contains(const Doc& doc, const Term& t) {
  for (const auto& w : windows(doc, static_cast<int>(t.size()))) {
    if (w == t) return true;
  }
  return false;
}

inline int doc_freq(const std::vector<Doc>& corpus, const Term& t) {
  int f = 0;
  for (const auto& d : corpus) {
    if (contains(d, t)) ++f;
  }
  return f;
}

inline std::vector<Term> distinct_terms(const std::vector<Doc>& corpus, int n) {
  std::vector<Term> out;
  for (const auto& d : corpus) {
    for (const auto& w : windows(d, n)) {
      bool seen = false;
      for (const auto& o : out) seen = seen || o == w;
      if (!seen) out.push_back(w);
    }
  }
  return out;
}

inline double ecdf(const std::vector<Doc>& corpus, int n, int f) {
  const auto terms = distinct_terms(corpus, n);
  if (terms.empty()) return 0.0;
  int at_most = 0;
  for (const auto& t : terms) {
    if (doc_freq(corpus, t) <= f) ++at_most;
  }
  return static_cast<double>(at_most) / static_cast<double>(terms.size());
}

inline int occur_num(const Corpora& c, const Term& t) {
  int occ = 0;
  for (const auto& corpus : c.docs) {
    if (doc_freq(corpus, t) > 0) ++occ;
  }
  return occ;
}

inline double cng(const Corpora& c, const Term& t, std::size_t p) {
  const int n = static_cast<int>(t.size());
  const int occ = occur_num(c, t);
  if (occ == 0) return 0.0;
  const double ep = ecdf(c.docs[p], n, doc_freq(c.docs[p], t));
  double sum = 0;
  for (std::size_t q = 0; q < c.docs.size(); ++q) {
    if (q == p) continue;
    const double eq = ecdf(c.docs[q], n, doc_freq(c.docs[q], t));
    sum += (ep - eq) / occ;
  }
  return sum / static_cast<double>(c.docs.size());
}

inline double only_style(const Corpora& c, const Doc& caption, std::size_t p) {
  double total = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto m = windows(caption, n);
    if (m.empty()) continue;
    double sum = 0;
    for (const auto& t : m) sum += cng(c, t, p);
    total += sum / static_cast<double>(m.size());
  }
  return total / 4;
}

// Dense cosine over the union of both captions' n-grams, with an arbitrary
// per-(caption, term) weight function.
template <class Weight>
double dense_cosine(const Doc& a, const Doc& b, int n, Weight weight) {
  std::vector<Term> vocab;
  for (const Doc* d : {&a, &b}) {
    for (const auto& w : windows(*d, n)) {
      bool seen = false;
      for (const auto& v : vocab) seen = seen || v == w;
      if (!seen) vocab.push_back(w);
    }
  }
  double dot = 0, na = 0, nb = 0;
  for (const auto& t : vocab) {
    const double x = weight(a, t);
    const double y = weight(b, t);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double style_cider(const Corpora& c, const Doc& a, const Doc& b, std::size_t p) {
  double total = 0;
  for (int n = 1; n <= 4; ++n) {
    total += dense_cosine(a, b, n, [&](const Doc& d, const Term& t) { return contains(d, t) ? cng(c, t, p) : 0.0; });
  }
  return total / 4;
}

inline int count_in(const Doc& d, const Term& t) {
  int k = 0;
  for (const auto& w : windows(d, static_cast<int>(t.size()))) {
    if (w == t) ++k;
  }
  return k;
}

inline double cider(const std::vector<Doc>& refs, const Doc& a, const Doc& b) {
  double total = 0;
  const double docs = static_cast<double>(refs.size());
  for (int n = 1; n <= 4; ++n) {
    total += dense_cosine(a, b, n, [&](const Doc& d, const Term& t) {
      int df = doc_freq(refs, t);
      if (df < 1) df = 1;
      return count_in(d, t) * std::log(docs / df);
    });
  }
  return total / 4;
}

}  // namespace oracle
