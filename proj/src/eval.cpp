#include "stylem/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "stylem/error.hpp"
#include "stylem/metrics.hpp"
#include "stylem/parallel.hpp"

namespace stylem {

std::string_view to_string(Comparison comparison) noexcept {
  return comparison == Comparison::all_styles ? "all" : "sampled";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, caption, purpose) so that results do not
// depend on how captions are split across threads.
std::mt19937_64 caption_rng(std::uint64_t seed, std::size_t caption, std::uint64_t purpose) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(caption * 4 + purpose)));
}

// Uniform integer in [0, bound) by rejection; mt19937_64 output is fully
// specified, unlike std::uniform_int_distribution.
std::size_t uniform_below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

// Keeps a uniformly random subset of `count` items (partial Fisher-Yates),
// preserving the drawn order.
template <class T>
void sample_in_place(std::vector<T>& items, std::size_t count, std::mt19937_64& rng) {
  if (count >= items.size()) return;
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(items[i], items[i + uniform_below(rng, items.size() - i)]);
  }
  items.resize(count);
}

struct FlatDataset {
  std::vector<const CaptionRecord*> docs;
  std::vector<std::size_t> style_of;     // dataset style per doc
  std::vector<std::size_t> style_begin;  // dataset style -> first doc; size styles + 1
  std::vector<std::size_t> index_style;  // dataset style -> index registry position
};

FlatDataset flatten(const CngIndex& index, const Dataset& dataset) {
  FlatDataset flat;
  flat.style_begin.push_back(0);
  for (std::size_t s = 0; s < dataset.corpora.size(); ++s) {
    const auto& corpus = dataset.corpora[s];
    auto idx = index.registry().find(corpus.style);
    if (!idx) throw Error(ErrorKind::validation, "dataset style '" + corpus.style + "' is not in the index registry");
    flat.index_style.push_back(*idx);
    for (const auto& doc : corpus.documents) {
      flat.docs.push_back(&doc);
      flat.style_of.push_back(s);
    }
    flat.style_begin.push_back(flat.docs.size());
  }
  return flat;
}

enum Status : signed char { kSkipped = -1, kFailed = 0, kSatisfied = 1 };

GtModeResult tally(const Dataset& dataset, const FlatDataset& flat, const std::vector<signed char>& status) {
  GtModeResult r;
  for (const auto& corpus : dataset.corpora) r.per_style.push_back(GtStyleCounts{corpus.style, 0, 0, 0});
  for (std::size_t d = 0; d < status.size(); ++d) {
    auto& s = r.per_style[flat.style_of[d]];
    if (status[d] == kSkipped) {
      ++s.skipped;
      ++r.skipped;
      continue;
    }
    ++s.evaluated;
    ++r.evaluated;
    if (status[d] == kSatisfied) {
      ++s.satisfied;
      ++r.satisfied;
    }
  }
  return r;
}

GtModeResult run_onlystyle(const CngIndex& index, const Dataset& dataset, const FlatDataset& flat,
                           const GtOptions& opt) {
  const auto styles = index.style_count();
  std::vector<signed char> status(flat.docs.size(), kFailed);
  parallel_for(flat.docs.size(), opt.threads, [&](std::size_t d) {
    const auto& tokens = flat.docs[d]->tokens;
    const auto truth = flat.index_style[flat.style_of[d]];
    bool ok = true;
    if (opt.comparison == Comparison::all_styles) {
      const auto scores = only_style_all(index, tokens);
      for (std::size_t q = 0; q < styles && ok; ++q) ok = q == truth || scores[truth] > scores[q];
    } else {
      std::vector<std::size_t> contrast;
      for (std::size_t q = 0; q < styles; ++q) {
        if (q != truth) contrast.push_back(q);
      }
      auto rng = caption_rng(opt.seed, d, 0);
      sample_in_place(contrast, opt.k, rng);
      const double own = only_style(index, tokens, truth);
      for (auto q : contrast) {
        if (!(own > only_style(index, tokens, q))) {
          ok = false;
          break;
        }
      }
    }
    status[d] = ok ? kSatisfied : kFailed;
  });
  return tally(dataset, flat, status);
}

GtModeResult run_stylecider(const CngIndex& index, const Dataset& dataset, const FlatDataset& flat,
                            const GtOptions& opt) {
  const auto n_docs = flat.docs.size();
  const auto n_styles = dataset.corpora.size();
  std::vector<signed char> status(n_docs, kSkipped);
  const bool implicit = opt.comparison == Comparison::all_styles && opt.max_refs == 0;

  struct Pools {
    std::vector<std::uint32_t> same;
    std::vector<std::uint32_t> diff;
  };

  auto draw_pools = [&](std::size_t d) {
    Pools pools;
    const auto p = flat.style_of[d];
    for (auto r = flat.style_begin[p]; r < flat.style_begin[p + 1]; ++r) {
      if (r != d) pools.same.push_back(static_cast<std::uint32_t>(r));
    }
    std::vector<std::size_t> contrast;
    for (std::size_t q = 0; q < n_styles; ++q) {
      if (q != p && flat.style_begin[q + 1] > flat.style_begin[q]) contrast.push_back(q);
    }
    auto rng = caption_rng(opt.seed, d, 1);
    if (opt.comparison == Comparison::sampled) sample_in_place(contrast, opt.k, rng);
    for (auto q : contrast) {
      for (auto r = flat.style_begin[q]; r < flat.style_begin[q + 1]; ++r) pools.diff.push_back(static_cast<std::uint32_t>(r));
    }
    if (opt.max_refs > 0) {
      sample_in_place(pools.same, opt.max_refs, rng);
      sample_in_place(pools.diff, opt.max_refs, rng);
    }
    return pools;
  };

  std::vector<StyleVectors> vectors(n_docs);
  std::vector<char> needed(n_docs);
  std::vector<Pools> pools;

  for (std::size_t p = 0; p < n_styles; ++p) {
    const auto first = flat.style_begin[p];
    const auto last = flat.style_begin[p + 1];
    const auto style = flat.index_style[p];
    if (first == last) continue;

    if (opt.max_refs == 0) {
      std::fill(needed.begin(), needed.end(), 1);
    } else {
      pools.assign(last - first, Pools{});
      parallel_for(last - first, opt.threads, [&](std::size_t i) { pools[i] = draw_pools(first + i); });
      std::fill(needed.begin(), needed.end(), 0);
      for (std::size_t d = first; d < last; ++d) needed[d] = 1;
      for (const auto& pl : pools) {
        for (auto r : pl.same) needed[r] = 1;
        for (auto r : pl.diff) needed[r] = 1;
      }
    }
    parallel_for(n_docs, opt.threads, [&](std::size_t d) {
      vectors[d] = needed[d] ? style_vectors(index, flat.docs[d]->tokens, style) : StyleVectors{};
    });

    parallel_for(last - first, opt.threads, [&](std::size_t i) {
      const auto d = first + i;
      double same_sum = 0;
      double diff_sum = 0;
      std::size_t same_n = 0;
      std::size_t diff_n = 0;
      if (implicit) {
        for (std::size_t r = 0; r < n_docs; ++r) {
          if (r == d) continue;
          const double v = mean_cosine(vectors[d], vectors[r]);
          if (flat.style_of[r] == p) {
            same_sum += v;
            ++same_n;
          } else {
            diff_sum += v;
            ++diff_n;
          }
        }
      } else {
        const Pools pl = opt.max_refs == 0 ? draw_pools(d) : std::move(pools[i]);
        for (auto r : pl.same) same_sum += mean_cosine(vectors[d], vectors[r]);
        for (auto r : pl.diff) diff_sum += mean_cosine(vectors[d], vectors[r]);
        same_n = pl.same.size();
        diff_n = pl.diff.size();
      }
      if (same_n == 0 || diff_n == 0) {
        status[d] = kSkipped;
        return;
      }
      const double same_mean = same_sum / static_cast<double>(same_n);
      const double diff_mean = diff_sum / static_cast<double>(diff_n);
      status[d] = same_mean > diff_mean ? kSatisfied : kFailed;
    });
  }
  return tally(dataset, flat, status);
}

}  // namespace

GtProtocolResult eval_ground_truth(const CngIndex& index, const Dataset& dataset, const GtOptions& options,
                                   std::string dataset_id) {
  if (options.comparison == Comparison::sampled && options.k == 0) {
    throw Error(ErrorKind::usage, "sampled comparison needs k >= 1");
  }
  const auto flat = flatten(index, dataset);
  GtProtocolResult result;
  result.dataset = std::move(dataset_id);
  if (options.onlystyle) result.onlystyle = run_onlystyle(index, dataset, flat, options);
  if (options.stylecider) result.stylecider = run_stylecider(index, dataset, flat, options);
  return result;
}

// ---------------------------------------------------------------------------

ModelEvalReport eval_model_outputs(const CngIndex& index, std::span<const CaptionRow> generations,
                                   std::span<const CaptionRow> references, unsigned threads) {
  if (generations.empty()) throw Error(ErrorKind::validation, "generations file has no rows");

  std::vector<std::size_t> target(generations.size());
  for (std::size_t g = 0; g < generations.size(); ++g) {
    const auto& row = generations[g];
    if (row.style.empty()) {
      throw Error(ErrorKind::validation, "generation on line " + std::to_string(row.line) + " has no 'style'");
    }
    auto idx = index.registry().find(row.style);
    if (!idx) {
      throw Error(ErrorKind::validation, "generation on line " + std::to_string(row.line) + " has unknown style '" +
                                             row.style + "'");
    }
    target[g] = *idx;
  }

  auto ref_key = [](const CaptionRow& r) { return r.image_id + '\x1f' + r.style; };
  std::unordered_map<std::string, std::vector<std::size_t>> by_key;
  std::vector<TokenSeq> ref_tokens;
  for (std::size_t r = 0; r < references.size(); ++r) {
    ref_tokens.push_back(references[r].tokens);
    if (!references[r].image_id.empty()) by_key[ref_key(references[r])].push_back(r);
  }
  std::optional<TfidfIndex> tfidf;
  if (!ref_tokens.empty()) tfidf = build_tfidf(ref_tokens);

  struct GenScore {
    double onlystyle = 0;
    bool resolved = false;
    double cider = 0;
    double stylecider = 0;
    BleuStats bleu;
  };
  std::vector<GenScore> scores(generations.size());
  parallel_for(generations.size(), threads, [&](std::size_t g) {
    const auto& row = generations[g];
    auto& out = scores[g];
    out.onlystyle = only_style(index, row.tokens, target[g]);
    if (row.image_id.empty()) return;
    auto it = by_key.find(ref_key(row));
    if (it == by_key.end()) return;
    out.resolved = true;
    std::vector<TokenSeq> refs;
    const auto candidate = style_vectors(index, row.tokens, target[g]);
    for (auto r : it->second) {
      refs.push_back(references[r].tokens);
      out.cider += cider(*tfidf, row.tokens, references[r].tokens);
      out.stylecider += mean_cosine(candidate, style_vectors(index, references[r].tokens, target[g]));
    }
    out.cider /= static_cast<double>(refs.size());
    out.stylecider /= static_cast<double>(refs.size());
    out.bleu = bleu_stats(row.tokens, refs);
  });

  ModelEvalReport report;
  report.references = references.size();
  std::unordered_map<std::string, std::size_t> model_row;
  std::vector<BleuStats> pooled;
  for (std::size_t g = 0; g < generations.size(); ++g) {
    const std::string model = generations[g].model.empty() ? "default" : generations[g].model;
    auto [it, inserted] = model_row.try_emplace(model, report.rows.size());
    if (inserted) {
      report.rows.push_back(ModelEvalRow{model});
      pooled.emplace_back();
    }
    auto& row = report.rows[it->second];
    const auto& s = scores[g];
    ++row.generations;
    row.onlystyle += s.onlystyle;
    if (!s.resolved) {
      ++report.unresolved;
      continue;
    }
    ++row.with_references;
    row.cider += s.cider;
    row.stylecider += s.stylecider;
    pooled[it->second] += s.bleu;
  }
  for (std::size_t m = 0; m < report.rows.size(); ++m) {
    auto& row = report.rows[m];
    row.onlystyle /= static_cast<double>(row.generations);
    if (row.with_references > 0) {
      row.cider /= static_cast<double>(row.with_references);
      row.stylecider /= static_cast<double>(row.with_references);
      row.bleu1 = pooled[m].score(1);
      row.bleu4 = pooled[m].score(4);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

bool RetrievalRanking::target_within(double fraction) const {
  const auto cutoff = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ranked.size())));
  return target_rank >= 1 && target_rank <= cutoff;
}

RetrievalRanking retrieval_rank(const CngIndex& index, std::span<const Token> caption, std::string_view target) {
  const auto target_idx = index.registry().index_of(target);
  const auto scores = only_style_all(index, caption);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RetrievalRanking ranking;
  ranking.caption.assign(caption.begin(), caption.end());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranking.ranked.emplace_back(index.registry().name(order[r]), scores[order[r]]);
    if (order[r] == target_idx) ranking.target_rank = r + 1;
  }
  return ranking;
}

CngMatrix cng_inspect(const CngIndex& index, std::span<const std::string> terms, std::span<const std::string> styles) {
  CngMatrix m;
  std::vector<std::size_t> cols;
  if (styles.empty()) {
    m.styles = index.registry().names();
    for (std::size_t s = 0; s < m.styles.size(); ++s) cols.push_back(s);
  } else {
    for (const auto& s : styles) {
      cols.push_back(index.registry().index_of(s));
      m.styles.push_back(s);
    }
  }
  for (const auto& raw : terms) {
    auto tokens = tokenize(raw);
    if (tokens.size() != 1) {
      throw Error(ErrorKind::usage, "term '" + raw + "' tokenizes to " + std::to_string(tokens.size()) +
                                        " tokens; expected exactly 1");
    }
    std::vector<double> row;
    for (auto c : cols) row.push_back(index.score(1, tokens.front(), c));
    m.terms.push_back(std::move(tokens.front()));
    m.values.push_back(std::move(row));
  }
  return m;
}

// ---------------------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::usage, "correlation needs two lists of equal length >= 2");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::usage, "correlation needs two lists of equal length >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Correlation rank_correlation(std::span<const double> metric_scores, std::span<const double> human_ranks) {
  return Correlation{pearson(metric_scores, human_ranks), spearman(metric_scores, human_ranks)};
}

}  // namespace stylem
