#include "stylem/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <json.hpp>

namespace stylem {

using Json = nlohmann::ordered_json;

std::optional<Format> parse_format(std::string_view text) noexcept {
  if (text == "text") return Format::text;
  if (text == "json") return Format::json;
  return std::nullopt;
}

RunConfig& RunConfig::set(std::string key, std::string value) {
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

double round4(double value) {
  const double r = std::round(value * 1e4) / 1e4;
  return r == 0 ? 0.0 : r;  // no "-0.0000"
}

std::string fixed4(double value) { return fmt::format("{:.4f}", round4(value)); }

namespace {

Json config_json(const RunConfig& config) {
  Json j;
  j["subcommand"] = config.subcommand;
  for (const auto& [k, v] : config.fields) j[k] = v;
  return j;
}

std::string config_text(const RunConfig& config) {
  std::string out = "# stylem " + config.subcommand + "\n";
  for (const auto& [k, v] : config.fields) out += "# " + k + ": " + v + "\n";
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json optional_number(const std::optional<double>& v) { return v ? Json(round4(*v)) : Json(nullptr); }

std::string optional_text(const std::optional<double>& v) { return v ? fixed4(*v) : std::string("undefined"); }

std::size_t widest(const std::vector<std::string>& items, std::size_t floor) {
  std::size_t w = floor;
  for (const auto& s : items) w = std::max(w, s.size());
  return w;
}

}  // namespace

std::string render(const RunConfig& config, const BuildLog& log, const DatasetStats& stats, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["styles"] = stats.styles();
    j["documents"] = stats.documents;
    j["tokens"] = stats.tokens;
    j["terms"] = Json::array();
    for (auto t : log.terms) j["terms"].push_back(t);
    j["per_style"] = Json::array();
    for (const auto& e : log.entries) {
      j["per_style"].push_back({{"style", e.style}, {"order", e.order}, {"documents", e.documents},
                                {"distinct_ngrams", e.distinct_ngrams}});
    }
    j["warnings"] = log.warnings;
    return dump(j);
  }
  std::string out = config_text(config);
  out += fmt::format("styles {}  documents {}  tokens {}\n", stats.styles(), stats.documents, stats.tokens);
  out += "terms";
  for (int n = 1; n <= kMaxOrder; ++n) out += fmt::format("  n={}: {}", n, log.terms[static_cast<std::size_t>(n - 1)]);
  out += "\n";
  std::vector<std::string> names;
  for (const auto& e : log.entries) names.push_back(e.style);
  const auto w = widest(names, 5);
  out += fmt::format("{:<{}}  order  documents  distinct\n", "style", w);
  for (const auto& e : log.entries) {
    out += fmt::format("{:<{}}  {:>5}  {:>9}  {:>8}\n", e.style, w, e.order, e.documents, e.distinct_ngrams);
  }
  for (const auto& warning : log.warnings) out += "warning: " + warning + "\n";
  return out;
}

std::string render(const RunConfig& config, const ScoreReport& report, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["metric"] = report.metric;
    j["rows"] = Json::array();
    for (const auto& r : report.rows) {
      Json row{{"line", r.line}};
      if (!r.style.empty()) row["style"] = r.style;
      row["score"] = round4(r.score);
      j["rows"].push_back(std::move(row));
    }
    j["aggregate"] = round4(report.aggregate);
    return dump(j);
  }
  std::string out = config_text(config);
  out += fmt::format("{:>6}  {:>8}  style\n", "line", report.metric);
  for (const auto& r : report.rows) out += fmt::format("{:>6}  {:>8}  {}\n", r.line, fixed4(r.score), r.style);
  out += fmt::format("aggregate {} {}\n", report.metric, fixed4(report.aggregate));
  return out;
}

namespace {

Json mode_json(const GtModeResult& m) {
  Json j;
  j["rate"] = round4(m.rate());
  j["evaluated"] = m.evaluated;
  j["satisfied"] = m.satisfied;
  j["skipped"] = m.skipped;
  j["per_style"] = Json::array();
  for (const auto& s : m.per_style) {
    const double rate = s.evaluated ? static_cast<double>(s.satisfied) / static_cast<double>(s.evaluated) : 0.0;
    j["per_style"].push_back({{"style", s.style},
                              {"evaluated", s.evaluated},
                              {"satisfied", s.satisfied},
                              {"skipped", s.skipped},
                              {"rate", round4(rate)}});
  }
  return j;
}

}  // namespace

std::string render(const RunConfig& config, const GtProtocolResult& result, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["dataset"] = result.dataset;
    j["onlystyle"] = result.onlystyle ? mode_json(*result.onlystyle) : Json(nullptr);
    j["stylecider"] = result.stylecider ? mode_json(*result.stylecider) : Json(nullptr);
    return dump(j);
  }
  std::string out = config_text(config);
  auto cell = [](const std::optional<GtModeResult>& m) { return m ? fixed4(m->rate()) : std::string("-"); };
  const auto w = std::max<std::size_t>(7, result.dataset.size());
  out += fmt::format("{:<{}}  {:>9}  {:>10}\n", "dataset", w, "OnlyStyle", "StyleCIDEr");
  out += fmt::format("{:<{}}  {:>9}  {:>10}\n", result.dataset, w, cell(result.onlystyle), cell(result.stylecider));
  auto counts = [&](const char* name, const std::optional<GtModeResult>& m) {
    if (!m) return;
    out += fmt::format("{}: evaluated {}  satisfied {}  skipped {}\n", name, m->evaluated, m->satisfied, m->skipped);
  };
  counts("onlystyle", result.onlystyle);
  counts("stylecider", result.stylecider);

  const auto& per = result.onlystyle ? result.onlystyle->per_style : result.stylecider->per_style;
  std::vector<std::string> names;
  for (const auto& s : per) names.push_back(s.style);
  const auto sw = widest(names, 5);
  out += fmt::format("{:<{}}  {:>9}  {:>10}\n", "style", sw, "OnlyStyle", "StyleCIDEr");
  for (std::size_t i = 0; i < per.size(); ++i) {
    auto style_rate = [&](const std::optional<GtModeResult>& m) {
      if (!m) return std::string("-");
      const auto& s = m->per_style[i];
      if (s.evaluated == 0) return std::string("-");
      return fixed4(static_cast<double>(s.satisfied) / static_cast<double>(s.evaluated));
    };
    out += fmt::format("{:<{}}  {:>9}  {:>10}\n", per[i].style, sw, style_rate(result.onlystyle),
                       style_rate(result.stylecider));
  }
  return out;
}

std::string render(const RunConfig& config, const ModelEvalReport& report, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["references"] = report.references;
    j["unresolved"] = report.unresolved;
    j["models"] = Json::array();
    for (const auto& r : report.rows) {
      j["models"].push_back({{"model", r.model},
                             {"bleu1", round4(r.bleu1)},
                             {"bleu4", round4(r.bleu4)},
                             {"cider", round4(r.cider)},
                             {"stylecider", round4(r.stylecider)},
                             {"onlystyle", round4(r.onlystyle)},
                             {"generations", r.generations},
                             {"with_references", r.with_references}});
    }
    return dump(j);
  }
  std::string out = config_text(config);
  std::vector<std::string> names;
  for (const auto& r : report.rows) names.push_back(r.model);
  const auto w = widest(names, 5);
  out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>10}  {:>9}\n", "model", w, "BLEU1", "BLEU4", "CIDEr",
                     "StyleCIDEr", "OnlyStyle");
  for (const auto& r : report.rows) {
    out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>10}  {:>9}\n", r.model, w, fixed4(r.bleu1), fixed4(r.bleu4),
                       fixed4(r.cider), fixed4(r.stylecider), fixed4(r.onlystyle));
  }
  out += fmt::format("references {}  unresolved generations {}\n", report.references, report.unresolved);
  return out;
}

std::string render(const RunConfig& config, const RetrievalRanking& ranking, Format format) {
  std::string caption;
  for (const auto& t : ranking.caption) caption += (caption.empty() ? "" : " ") + t;
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["caption"] = caption;
    j["target_rank"] = ranking.target_rank;
    j["styles"] = ranking.ranked.size();
    j["ranking"] = Json::array();
    for (std::size_t r = 0; r < ranking.ranked.size(); ++r) {
      j["ranking"].push_back({{"rank", r + 1}, {"style", ranking.ranked[r].first}, {"onlystyle", round4(ranking.ranked[r].second)}});
    }
    return dump(j);
  }
  std::string out = config_text(config);
  out += "caption: " + caption + "\n";
  out += fmt::format("target rank {} of {}\n", ranking.target_rank, ranking.ranked.size());
  for (std::size_t r = 0; r < ranking.ranked.size(); ++r) {
    out += fmt::format("{:>4}  {:>8}  {}\n", r + 1, fixed4(ranking.ranked[r].second), ranking.ranked[r].first);
  }
  return out;
}

std::string render(const RunConfig& config, const CngMatrix& matrix, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["terms"] = matrix.terms;
    j["styles"] = Json::array();
    for (std::size_t s = 0; s < matrix.styles.size(); ++s) {
      Json scores;
      for (std::size_t t = 0; t < matrix.terms.size(); ++t) scores[matrix.terms[t]] = round4(matrix.values[t][s]);
      j["styles"].push_back({{"style", matrix.styles[s]}, {"scores", std::move(scores)}});
    }
    return dump(j);
  }
  // One row per style, one column per term.
  std::string out = config_text(config);
  const auto sw = widest(matrix.styles, 5);
  out += fmt::format("{:<{}}", "style", sw);
  for (const auto& t : matrix.terms) out += fmt::format("  {:>{}}", t, std::max<std::size_t>(8, t.size()));
  out += "\n";
  for (std::size_t s = 0; s < matrix.styles.size(); ++s) {
    out += fmt::format("{:<{}}", matrix.styles[s], sw);
    for (std::size_t t = 0; t < matrix.terms.size(); ++t) {
      out += fmt::format("  {:>{}}", fixed4(matrix.values[t][s]), std::max<std::size_t>(8, matrix.terms[t].size()));
    }
    out += "\n";
  }
  return out;
}

std::string render(const RunConfig& config, const Correlation& corr, Format format) {
  if (format == Format::json) {
    Json j;
    j["config"] = config_json(config);
    j["pearson"] = optional_number(corr.pearson);
    j["spearman"] = optional_number(corr.spearman);
    return dump(j);
  }
  return config_text(config) + "pearson " + optional_text(corr.pearson) + "\nspearman " +
         optional_text(corr.spearman) + "\n";
}

}  // namespace stylem
