#include <doctest.h>

#include <random>

#include "stylem/error.hpp"
#include "stylem/eval.hpp"
#include "stylem/metrics.hpp"
#include "synthetic.hpp"

using namespace stylem;

namespace {

CngIndex tiny_index() { return build_index(make_dataset({{"A", "happy dog"}, {"A", "happy cat"}, {"B", "sad dog"}})); }

}  // namespace

TEST_CASE("ground truth on disjoint vocabularies is fully satisfied") {
  const auto ds = make_dataset(synth::disjoint_rows(3, 50, 17));
  const auto index = build_index(ds);
  for (auto comparison : {Comparison::all_styles, Comparison::sampled}) {
    GtOptions opt;
    opt.comparison = comparison;
    opt.k = 1;
    const auto r = eval_ground_truth(index, ds, opt, "disjoint");
    REQUIRE(r.onlystyle);
    REQUIRE(r.stylecider);
    CHECK(r.onlystyle->rate() == 1.0);
    CHECK(r.stylecider->rate() == 1.0);
    CHECK(r.onlystyle->evaluated == 150);
    CHECK(r.stylecider->skipped == 0);
    CHECK(r.onlystyle->per_style.size() == 3);
    CHECK(r.onlystyle->per_style[2].satisfied == 50);
    CHECK(r.dataset == "disjoint");
  }
}

TEST_CASE("verbatim cross-style duplicates lower both rates") {
  auto rows = synth::disjoint_rows(3, 50, 17);
  for (std::size_t i = 0; i < 5; ++i) rows.emplace_back("Style1", rows[i].second);
  const auto ds = make_dataset(rows);
  const auto index = build_index(ds);
  const auto r = eval_ground_truth(index, ds, GtOptions{});
  CHECK(r.onlystyle->rate() < 1.0);
  CHECK(r.stylecider->rate() < 1.0);
  CHECK(r.onlystyle->per_style[0].satisfied + r.onlystyle->per_style[1].satisfied < 105);
}

TEST_CASE("captions without a same-style partner are skipped for StyleCIDEr") {
  const auto ds = make_dataset({{"A", "happy dog"}, {"A", "happy cat"}, {"B", "sad dog"}});
  const auto index = build_index(ds);
  const auto r = eval_ground_truth(index, ds, GtOptions{});
  CHECK(r.stylecider->skipped == 1);
  CHECK(r.stylecider->evaluated == 2);
  CHECK(r.stylecider->per_style[1].skipped == 1);
  CHECK(r.onlystyle->evaluated == 3);
}

TEST_CASE("ties count as failures") {
  // Identical captions under both styles: every score ties.
  const auto ds = make_dataset({{"A", "same words"}, {"A", "same words"}, {"B", "same words"}, {"B", "same words"}});
  const auto index = build_index(ds);
  const auto r = eval_ground_truth(index, ds, GtOptions{});
  CHECK(r.onlystyle->satisfied == 0);
  CHECK(r.stylecider->satisfied == 0);
}

TEST_CASE("dataset styles must exist in the index") {
  const auto index = tiny_index();
  const auto other = make_dataset({{"A", "x"}, {"C", "y"}});
  CHECK_THROWS_AS(eval_ground_truth(index, other, GtOptions{}), Error);
  GtOptions bad;
  bad.comparison = Comparison::sampled;
  bad.k = 0;
  CHECK_THROWS_AS(eval_ground_truth(index, make_dataset({{"A", "x"}, {"B", "y"}}), bad), Error);
}

TEST_CASE("protocol results are independent of threads and depend only on the seed") {
  auto rows = synth::disjoint_rows(6, 20, 3);
  for (std::size_t i = 0; i < 12; ++i) rows.emplace_back("Style" + std::to_string(i % 6), rows[i * 7].second);
  const auto ds = make_dataset(rows);
  const auto index = build_index(ds);
  GtOptions opt;
  opt.comparison = Comparison::sampled;
  opt.k = 2;
  opt.max_refs = 5;
  opt.seed = 42;
  auto counts = [&](unsigned threads) {
    opt.threads = threads;
    const auto r = eval_ground_truth(index, ds, opt);
    std::vector<std::size_t> v;
    for (const auto* m : {&*r.onlystyle, &*r.stylecider}) {
      for (const auto& s : m->per_style) v.insert(v.end(), {s.evaluated, s.satisfied, s.skipped});
    }
    return v;
  };
  const auto one = counts(1);
  CHECK(one == counts(3));
  CHECK(one == counts(8));
}

TEST_CASE("retrieval_rank orders styles by OnlyStyle") {
  const auto index = tiny_index();
  const auto r = retrieval_rank(index, tokenize("happy cat"), "A");
  CHECK(r.target_rank == 1);
  CHECK(r.ranked[0].first == "A");
  CHECK(r.ranked[0].second > r.ranked[1].second);
  CHECK(r.target_within(0.5));

  const auto b = retrieval_rank(index, tokenize("happy cat"), "B");
  CHECK(b.target_rank == 2);
  CHECK_FALSE(b.target_within(0.1));

  const auto empty = retrieval_rank(index, TokenSeq{}, "B");
  CHECK(empty.ranked[0].first == "A");
  CHECK(empty.ranked[1].first == "B");
  CHECK(empty.target_rank == 2);
  CHECK(empty.ranked[0].second == 0.0);

  CHECK_THROWS_AS(retrieval_rank(index, TokenSeq{}, "C"), Error);
}

TEST_CASE("retrieval scores equal OnlyStyle computed per style") {
  std::mt19937_64 rng(1);
  const auto ds = make_dataset(synth::disjoint_rows(7, 10, 9, 5));
  const auto index = build_index(ds);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> vocab;
    for (int s = 0; s < 7; ++s) vocab.push_back("s" + std::to_string(s) + "w" + std::to_string(trial % 5));
    const auto caption = synth::random_tokens(rng, 0, 8, vocab);
    const auto r = retrieval_rank(index, caption, "Style3");
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
      CHECK(r.ranked[i].second == only_style(index, caption, r.ranked[i].first));
      if (i > 0) CHECK(r.ranked[i].second <= r.ranked[i - 1].second);
    }
  }
}

TEST_CASE("cng_inspect") {
  const auto index = tiny_index();
  const std::vector<std::string> terms{"Happy", "dog", "zebra"};
  const auto m = cng_inspect(index, terms, std::vector<std::string>{"B", "A"});
  CHECK(m.terms == std::vector<std::string>{"happy", "dog", "zebra"});
  CHECK(m.styles == std::vector<std::string>{"B", "A"});
  CHECK(m.values[0][0] == -0.5);
  CHECK(m.values[0][1] == 0.5);
  CHECK(m.values[2] == std::vector<double>{0.0, 0.0});

  const auto all = cng_inspect(index, terms, std::vector<std::string>{});
  CHECK(all.styles == std::vector<std::string>{"A", "B"});

  CHECK_THROWS_AS(cng_inspect(index, std::vector<std::string>{"two words"}, {}), Error);
  CHECK_THROWS_AS(cng_inspect(index, std::vector<std::string>{"!!"}, {}), Error);
  CHECK_THROWS_AS(cng_inspect(index, terms, std::vector<std::string>{"Nope"}), Error);
}

TEST_CASE("a near-uniform word scores near zero and negative somewhere") {
  const auto ds = make_dataset({{"Happy", "not happy at all"}, {"Happy", "so happy"}, {"Happy", "happy day"},
                                {"Angry", "not fair"}, {"Angry", "i am angry"},
                                {"Curious", "not sure why"}, {"Curious", "i wonder why"}});
  const auto index = build_index(ds);
  const auto m = cng_inspect(index, std::vector<std::string>{"not", "happy"}, {});
  bool negative = false;
  for (double v : m.values[0]) {
    CHECK(std::abs(v) < 0.2);
    negative = negative || v < 0;
  }
  CHECK(negative);
  CHECK(m.values[1][0] > m.values[1][1]);
  CHECK(m.values[1][1] < 0);
}

TEST_CASE("rank correlation") {
  const std::vector<double> inc{1, 2, 3};
  const std::vector<double> dec{3, 2, 1};
  CHECK(*rank_correlation(inc, inc).spearman == 1.0);
  CHECK(*rank_correlation(inc, dec).spearman == -1.0);
  CHECK(*rank_correlation(inc, inc).pearson == doctest::Approx(1.0));
  CHECK(*rank_correlation(std::vector<double>{0.1, 0.3, 0.2}, inc).spearman == doctest::Approx(0.5));

  const std::vector<double> flat{2, 2, 2};
  const auto undefined = rank_correlation(flat, inc);
  CHECK_FALSE(undefined.pearson);
  CHECK_FALSE(undefined.spearman);

  CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
  CHECK_THROWS_AS(rank_correlation(std::vector<double>{1}, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(rank_correlation(inc, std::vector<double>{1, 2}), Error);
}

TEST_CASE("spearman is invariant under monotone transforms") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(3, 20)(rng);
    std::vector<double> x(n), y(n), fx(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      fx[i] = std::exp(x[i]) + 3 * x[i];
    }
    CHECK(*spearman(x, y) == doctest::Approx(*spearman(fx, y)).epsilon(1e-12));
  }
}

TEST_CASE("style-aware generations beat style-agnostic ones on style metrics") {
  const auto sc = synth::model_scenario(21);
  const auto index = build_index(make_dataset(sc.train));
  const auto report = eval_model_outputs(index, sc.generations, sc.references);
  REQUIRE(report.rows.size() == 2);
  const auto& styled = report.rows[0];
  const auto& plain = report.rows[1];
  CHECK(styled.model == "Styled");
  CHECK(plain.model == "NoStyle");
  CHECK(styled.onlystyle > plain.onlystyle);
  CHECK(styled.stylecider > plain.stylecider);
  CHECK(plain.cider > styled.cider);
  CHECK(report.unresolved == 0);
  CHECK(styled.with_references == 80);
}

TEST_CASE("generations identical to references score one on BLEU and CIDEr") {
  const auto sc = synth::model_scenario(4, 10);
  const auto index = build_index(make_dataset(sc.train));
  auto gens = sc.references;
  for (auto& g : gens) g.model = "Copy";
  const auto report = eval_model_outputs(index, gens, sc.references, 4);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].bleu1 == 1.0);
  CHECK(report.rows[0].bleu4 == 1.0);
  CHECK(report.rows[0].cider == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model evaluation errors and unresolved generations") {
  const auto index = tiny_index();
  CHECK_THROWS_AS(eval_model_outputs(index, std::vector<CaptionRow>{}, std::vector<CaptionRow>{}), Error);

  CaptionRow g;
  g.caption = "happy dog";
  g.tokens = tokenize(g.caption);
  g.image_id = "1";
  std::vector<CaptionRow> gens{g};
  CHECK_THROWS_AS(eval_model_outputs(index, gens, {}), Error);  // no style
  gens[0].style = "C";
  CHECK_THROWS_AS(eval_model_outputs(index, gens, {}), Error);  // unknown style
  gens[0].style = "A";
  CaptionRow ref = gens[0];
  ref.image_id = "2";
  const auto report = eval_model_outputs(index, gens, std::vector<CaptionRow>{ref});
  CHECK(report.unresolved == 1);
  CHECK(report.rows[0].with_references == 0);
  CHECK(report.rows[0].model == "default");
  CHECK(report.rows[0].onlystyle == only_style(index, gens[0].tokens, "A"));
}
