// stylem: build contrastive n-gram indexes and score stylized captions.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stylem/cng.hpp"
#include "stylem/corpus.hpp"
#include "stylem/error.hpp"
#include "stylem/eval.hpp"
#include "stylem/metrics.hpp"
#include "stylem/report.hpp"

namespace {

using namespace stylem;

struct Common {
  std::string format = "text";
  std::string out;
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("STYLEMETRIC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::usage, std::string("STYLEMETRIC_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

std::string one_line(std::string text) {
  for (auto& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

Format resolve_format(const std::string& text) {
  if (auto f = parse_format(text)) return *f;
  throw Error(ErrorKind::usage, "--format must be text or json");
}

void emit(const std::string& body, const std::string& out) {
  if (out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::io, "cannot write '" + out + "'");
  file << body;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Style labels may themselves contain commas ("Abrasive (Annoying,
// Irritating)"), so the list is matched against the registry, longest label
// first at each position.
std::vector<std::string> split_styles(const std::string& text, const StyleRegistry& registry) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best = 0;
    for (const auto& name : registry.names()) {
      if (name.size() > best && text.compare(pos, name.size(), name) == 0 &&
          (pos + name.size() == text.size() || text[pos + name.size()] == ',')) {
        best = name.size();
      }
    }
    if (best == 0) {
      const auto comma = text.find(',', pos);
      throw Error(ErrorKind::usage, "unknown style '" + text.substr(pos, comma - pos) + "'");
    }
    out.push_back(text.substr(pos, best));
    pos += best + 1;
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split_commas(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::usage, std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

void add_common(CLI::App* cmd, Common& common, const char* out_flag = "--out") {
  cmd->add_option("--format", common.format, "Report format: text or json")->capture_default_str();
  cmd->add_option(out_flag, common.out, "Write the report to this file instead of stdout");
  cmd->add_option("--threads", common.threads, "Worker threads (default: STYLEMETRIC_THREADS or 1)");
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string dataset;
  std::string index;
  std::string split = "train";
};

int cmd_build_index(const BuildArgs& a, const Common& common) {
  const auto filter = parse_split_filter(a.split);
  if (!filter) throw Error(ErrorKind::usage, "--split must be train, val, test or all");
  const auto format = resolve_format(common.format);
  const auto dataset = load_dataset(a.dataset, *filter);
  BuildLog log;
  const auto index = build_index(dataset, BuildOptions{resolve_threads(common.threads), a.split}, &log);
  save_index(index, a.index);
  RunConfig config{"build-index", {}};
  config.set("dataset", a.dataset).set("index", a.index).set("split", a.split).set("tokenizer", std::string(kTokenizerId));
  emit(render(config, log, dataset_stats(dataset), format), common.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string index;
  std::string metric;
  std::string captions;
  std::string refs;
  std::string style;
};

int cmd_score(const ScoreArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const bool needs_index = a.metric == "onlystyle" || a.metric == "stylecider";
  const bool needs_refs = a.metric != "onlystyle";
  if (!(needs_index || a.metric == "cider" || a.metric == "bleu1" || a.metric == "bleu4")) {
    throw Error(ErrorKind::usage, "--metric must be one of onlystyle, stylecider, cider, bleu1, bleu4");
  }
  if (needs_index && a.index.empty()) throw Error(ErrorKind::usage, "metric " + a.metric + " needs --index");
  if (needs_refs && a.refs.empty()) throw Error(ErrorKind::usage, "metric " + a.metric + " needs --refs");

  std::optional<CngIndex> index;
  if (needs_index) index = load_index(a.index);
  const auto rows = load_caption_rows(a.captions);
  if (rows.empty()) throw Error(ErrorKind::validation, "captions file has no rows");
  std::vector<CaptionRow> refs;
  if (needs_refs) refs = load_caption_rows(a.refs);
  if (needs_refs && refs.empty()) throw Error(ErrorKind::validation, "references file has no rows");

  // Rows with an image_id are matched to every reference with that id;
  // rows without one are matched to the reference on the same position.
  std::unordered_map<std::string, std::vector<std::size_t>> by_image;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    if (!refs[r].image_id.empty()) by_image[refs[r].image_id].push_back(r);
  }
  auto matched = [&](std::size_t i) {
    std::vector<TokenSeq> out;
    const auto& row = rows[i];
    if (!row.image_id.empty()) {
      if (auto it = by_image.find(row.image_id); it != by_image.end()) {
        for (auto r : it->second) out.push_back(refs[r].tokens);
      }
    } else if (i < refs.size()) {
      out.push_back(refs[i].tokens);
    }
    if (out.empty()) {
      throw Error(ErrorKind::validation, "caption on line " + std::to_string(row.line) + " has no matching reference");
    }
    return out;
  };

  std::optional<TfidfIndex> tfidf;
  if (a.metric == "cider") {
    std::vector<TokenSeq> all;
    for (const auto& r : refs) all.push_back(r.tokens);
    tfidf = build_tfidf(all);
  }

  ScoreReport report;
  report.metric = a.metric;
  BleuStats pooled;
  double total = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ScoreReport::Row out{rows[i].line, {}, 0};
    if (needs_index) {
      out.style = rows[i].style.empty() ? a.style : rows[i].style;
      if (out.style.empty()) {
        throw Error(ErrorKind::usage, "metric " + a.metric + " needs a style: add 'style' to line " +
                                          std::to_string(rows[i].line) + " or pass --style");
      }
    }
    if (a.metric == "onlystyle") {
      out.score = only_style(*index, rows[i].tokens, out.style);
    } else {
      const auto references = matched(i);
      if (a.metric == "stylecider") {
        for (const auto& ref : references) out.score += style_cider(*index, rows[i].tokens, ref, out.style);
        out.score /= static_cast<double>(references.size());
      } else if (a.metric == "cider") {
        for (const auto& ref : references) out.score += cider(*tfidf, rows[i].tokens, ref);
        out.score /= static_cast<double>(references.size());
      } else {
        const auto stats = bleu_stats(rows[i].tokens, references);
        out.score = stats.score(a.metric == "bleu1" ? 1 : 4);
        pooled += stats;
      }
    }
    total += out.score;
    report.rows.push_back(std::move(out));
  }
  report.aggregate = a.metric == "bleu1"   ? pooled.score(1)
                     : a.metric == "bleu4" ? pooled.score(4)
                                           : total / static_cast<double>(rows.size());

  RunConfig config{"score", {}};
  config.set("metric", a.metric).set("captions", a.captions);
  if (!a.index.empty()) config.set("index", a.index);
  if (!a.refs.empty()) config.set("refs", a.refs);
  if (!a.style.empty()) config.set("style", a.style);
  emit(render(config, report, format), common.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct GtArgs {
  std::string index;
  std::string dataset;
  std::string dataset_id;
  std::string split = "all";
  std::string mode = "both";
  std::string comparison = "all";
  std::size_t k = 20;
  std::uint64_t seed = 0;
  std::size_t max_refs = 0;
};

int cmd_eval_gt(const GtArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const auto filter = parse_split_filter(a.split);
  if (!filter) throw Error(ErrorKind::usage, "--split must be train, val, test or all");
  GtOptions options;
  if (a.mode == "onlystyle") {
    options.stylecider = false;
  } else if (a.mode == "stylecider") {
    options.onlystyle = false;
  } else if (a.mode != "both") {
    throw Error(ErrorKind::usage, "--mode must be onlystyle, stylecider or both");
  }
  if (a.comparison == "sampled") {
    options.comparison = Comparison::sampled;
  } else if (a.comparison != "all") {
    throw Error(ErrorKind::usage, "--comparison must be all or sampled");
  }
  options.k = a.k;
  options.seed = a.seed;
  options.max_refs = a.max_refs;
  options.threads = resolve_threads(common.threads);

  const auto index = load_index(a.index);
  const auto dataset = load_dataset(a.dataset, *filter);
  const auto id = a.dataset_id.empty() ? std::filesystem::path(a.dataset).stem().string() : a.dataset_id;
  const auto result = eval_ground_truth(index, dataset, options, id);

  RunConfig config{"eval-gt", {}};
  config.set("index", a.index).set("dataset", a.dataset).set("split", a.split).set("mode", a.mode);
  config.set("comparison", a.comparison).set("k", std::to_string(a.k)).set("seed", std::to_string(a.seed));
  config.set("max_refs", std::to_string(a.max_refs));
  emit(render(config, result, format), common.out);
  return 0;
}

struct ModelsArgs {
  std::string index;
  std::string generations;
  std::string references;
};

int cmd_eval_models(const ModelsArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const auto index = load_index(a.index);
  const auto generations = load_caption_rows(a.generations);
  const auto references = load_caption_rows(a.references);
  const auto report = eval_model_outputs(index, generations, references, resolve_threads(common.threads));
  RunConfig config{"eval-models", {}};
  config.set("index", a.index).set("generations", a.generations).set("references", a.references);
  emit(render(config, report, format), common.out);
  return 0;
}

struct RankArgs {
  std::string index;
  std::string caption;
  std::string style;
};

int cmd_rank(const RankArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const auto index = load_index(a.index);
  const auto ranking = retrieval_rank(index, tokenize(a.caption), a.style);
  RunConfig config{"rank", {}};
  config.set("index", a.index).set("caption", a.caption).set("style", a.style);
  emit(render(config, ranking, format), common.out);
  return 0;
}

struct CngArgs {
  std::string index;
  std::string terms;
  std::string styles;
};

int cmd_cng(const CngArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const auto index = load_index(a.index);
  const auto terms = split_commas(a.terms);
  const auto styles = a.styles.empty() ? std::vector<std::string>{} : split_styles(a.styles, index.registry());
  const auto matrix = cng_inspect(index, terms, styles);
  RunConfig config{"cng", {}};
  config.set("index", a.index).set("terms", a.terms).set("styles", a.styles.empty() ? "all" : a.styles);
  emit(render(config, matrix, format), common.out);
  return 0;
}

struct CorrArgs {
  std::string scores;
  std::string ranks;
};

int cmd_corr(const CorrArgs& a, const Common& common) {
  const auto format = resolve_format(common.format);
  const auto scores = parse_numbers(a.scores, "--scores");
  const auto ranks = parse_numbers(a.ranks, "--ranks");
  const auto corr = rank_correlation(scores, ranks);
  RunConfig config{"corr", {}};
  config.set("scores", a.scores).set("ranks", a.ranks);
  emit(render(config, corr, format), common.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive n-gram style metrics for captions"};
  app.require_subcommand(1);
  Common common;

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-index", "Build a CNG index from a JSONL dataset");
  build_cmd->add_option("--dataset", build.dataset, "JSONL dataset")->required();
  build_cmd->add_option("--out", build.index, "Index file to write")->required();
  build_cmd->add_option("--split", build.split, "Rows feeding the index: train, val, test or all")->capture_default_str();
  add_common(build_cmd, common, "--log");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score captions with one metric");
  score_cmd->add_option("--index", score.index, "CNG index (onlystyle, stylecider)");
  score_cmd->add_option("--metric", score.metric, "onlystyle, stylecider, cider, bleu1 or bleu4")->required();
  score_cmd->add_option("--captions", score.captions, "JSONL captions")->required();
  score_cmd->add_option("--refs", score.refs, "JSONL references (stylecider, cider, bleu)");
  score_cmd->add_option("--style", score.style, "Style for rows without a 'style' field");
  add_common(score_cmd, common);

  GtArgs gt;
  auto* gt_cmd = app.add_subcommand("eval-gt", "Ground-truth satisfaction rates");
  gt_cmd->add_option("--index", gt.index, "CNG index")->required();
  gt_cmd->add_option("--dataset", gt.dataset, "JSONL dataset to evaluate")->required();
  gt_cmd->add_option("--dataset-id", gt.dataset_id, "Name shown in the report (default: file stem)");
  gt_cmd->add_option("--split", gt.split, "Rows to evaluate: train, val, test or all")->capture_default_str();
  gt_cmd->add_option("--mode", gt.mode, "onlystyle, stylecider or both")->capture_default_str();
  gt_cmd->add_option("--comparison", gt.comparison, "all or sampled")->capture_default_str();
  gt_cmd->add_option("--k", gt.k, "Contrast styles per caption when sampled")->capture_default_str();
  gt_cmd->add_option("--seed", gt.seed, "Sampling seed")->capture_default_str();
  gt_cmd->add_option("--max-refs", gt.max_refs, "Cap on each StyleCIDEr reference pool (0 = none)")->capture_default_str();
  add_common(gt_cmd, common);

  ModelsArgs models;
  auto* models_cmd = app.add_subcommand("eval-models", "Compare model generations against references");
  models_cmd->add_option("--index", models.index, "CNG index")->required();
  models_cmd->add_option("--generations", models.generations, "JSONL generations")->required();
  models_cmd->add_option("--references", models.references, "JSONL references")->required();
  add_common(models_cmd, common);

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank every style by OnlyStyle for one caption");
  rank_cmd->add_option("--index", rank.index, "CNG index")->required();
  rank_cmd->add_option("--caption", rank.caption, "Caption text")->required();
  rank_cmd->add_option("--style", rank.style, "Target style")->required();
  add_common(rank_cmd, common);

  CngArgs cng;
  auto* cng_cmd = app.add_subcommand("cng", "Show unigram CNG scores per style");
  cng_cmd->add_option("--index", cng.index, "CNG index")->required();
  cng_cmd->add_option("--terms", cng.terms, "Comma-separated single words")->required();
  cng_cmd->add_option("--styles", cng.styles, "Comma-separated styles (default: all)");
  add_common(cng_cmd, common);

  CorrArgs corr;
  auto* corr_cmd = app.add_subcommand("corr", "Pearson and Spearman correlation");
  corr_cmd->add_option("--scores", corr.scores, "Comma-separated metric scores")->required();
  corr_cmd->add_option("--ranks", corr.ranks, "Comma-separated human ranks")->required();
  add_common(corr_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "stylem: error[usage]: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*build_cmd) return cmd_build_index(build, common);
    if (*score_cmd) return cmd_score(score, common);
    if (*gt_cmd) return cmd_eval_gt(gt, common);
    if (*models_cmd) return cmd_eval_models(models, common);
    if (*rank_cmd) return cmd_rank(rank, common);
    if (*cng_cmd) return cmd_cng(cng, common);
    if (*corr_cmd) return cmd_corr(corr, common);
  } catch (const Error& e) {
    std::cerr << "stylem: error[" << to_string(e.kind()) << "]: " << one_line(e.what()) << "\n";
    return e.kind() == ErrorKind::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "stylem: error[internal]: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 2;
}
