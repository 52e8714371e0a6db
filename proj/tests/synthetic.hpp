#pragma once

// Seeded generators for test corpora.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "stylem/corpus.hpp"

namespace synth {

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                                              const std::vector<std::string>& vocab) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = vocab[pick(rng)];
  return out;
}

inline const std::vector<std::string>& small_vocab() {
  static const std::vector<std::string> v{"a", "b", "c", "d", "e", "f"};
  return v;
}

// 2-5 styles, at most 10 documents in total (each style >= 1), 1-8 tokens.
struct RandomCorpus {
  oracle::Corpora oracle;
  stylem::Dataset dataset;
};

inline RandomCorpus random_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t styles = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
  std::vector<std::size_t> counts(styles, 1);
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 10 - styles)(rng);
  for (std::size_t i = 0; i < extra; ++i) ++counts[std::uniform_int_distribution<std::size_t>(0, styles - 1)(rng)];

  RandomCorpus out;
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t s = 0; s < styles; ++s) {
    const std::string name = "S" + std::to_string(s);
    out.oracle.styles.push_back(name);
    out.oracle.docs.emplace_back();
    for (std::size_t d = 0; d < counts[s]; ++d) {
      auto doc = random_tokens(rng, 1, 8, small_vocab());
      out.oracle.docs.back().push_back(doc);
      rows.emplace_back(name, join(doc));
    }
  }
  out.dataset = stylem::make_dataset(rows);
  return out;
}

// Captions for scoring: 0-8 tokens, may include a word never seen in training.
inline std::vector<std::string> random_caption(std::mt19937_64& rng) {
  auto vocab = small_vocab();
  vocab.push_back("zz");
  return random_tokens(rng, 0, 8, vocab);
}

// `styles` styles with pairwise-disjoint vocabularies: style s uses words
// "s<s>w<j>". Captions have 3-8 tokens.
inline std::vector<std::pair<std::string, std::string>> disjoint_rows(std::size_t styles, std::size_t per_style,
                                                                      std::uint64_t seed, std::size_t vocab_size = 12) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t s = 0; s < styles; ++s) {
    std::vector<std::string> vocab;
    for (std::size_t j = 0; j < vocab_size; ++j) vocab.push_back("s" + std::to_string(s) + "w" + std::to_string(j));
    for (std::size_t i = 0; i < per_style; ++i) {
      rows.emplace_back("Style" + std::to_string(s), join(random_tokens(rng, 3, 8, vocab)));
    }
  }
  return rows;
}

// Two styles captioning the same scenes, differing only in style phrases. "Styled" generations carry a style phrase and little of
// the scene; "NoStyle" generations reproduce the scene exactly.
struct ModelScenario {
  std::vector<std::pair<std::string, std::string>> train;
  std::vector<stylem::CaptionRow> references;
  std::vector<stylem::CaptionRow> generations;
};

inline ModelScenario model_scenario(std::uint64_t seed, std::size_t images = 40) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> scene_vocab{"dog",   "man",   "woman", "beach", "park",  "ball",  "red",
                                             "blue",  "runs",  "sits",  "tree",  "car",   "street", "river",
                                             "boat",  "child", "grass", "bench", "hat",   "bike"};
  const std::vector<std::pair<std::string, std::vector<std::string>>> styles{
      {"Happy", {"what a joyful day", "i love this so much", "so happy and cheerful"}},
      {"Sad", {"this makes me so gloomy", "i feel lonely and sad", "what a dreary sight"}}};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto scene = [&] { return random_tokens(rng, 8, 8, scene_vocab); };

  ModelScenario out;
  for (int i = 0; i < 200; ++i) {
    const auto s = join(scene());
    for (const auto& [name, phrases] : styles) out.train.emplace_back(name, s + " " + phrases[pick(phrases.size())]);
  }
  auto row = [](std::string model, std::string image, std::string style, std::string caption) {
    stylem::CaptionRow r;
    r.model = std::move(model);
    r.image_id = std::move(image);
    r.style = std::move(style);
    r.caption = std::move(caption);
    r.tokens = stylem::tokenize(r.caption);
    return r;
  };
  for (std::size_t i = 0; i < images; ++i) {
    const auto s = scene();
    const auto image = "img" + std::to_string(i);
    for (const auto& [name, phrases] : styles) {
      out.references.push_back(row("", image, name, join(s) + " " + phrases[pick(phrases.size())]));
      out.generations.push_back(row("Styled", image, name, s[0] + " " + phrases[pick(phrases.size())]));
      out.generations.push_back(row("NoStyle", image, name, join(s)));
    }
  }
  return out;
}

}  // namespace synth
