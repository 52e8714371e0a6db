#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stylem/cng.hpp"
#include "stylem/corpus.hpp"
#include "stylem/eval.hpp"

namespace stylem {

enum class Format { text, json };

std::optional<Format> parse_format(std::string_view text) noexcept;

// Invocation settings echoed at the top of every report.
struct RunConfig {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> fields;

  RunConfig& set(std::string key, std::string value);
};

// Per-caption scores from `stylem score`.
struct ScoreReport {
  std::string metric;
  struct Row {
    std::size_t line = 0;
    std::string style;
    double score = 0;
  };
  std::vector<Row> rows;
  double aggregate = 0;
};

// Reals are rounded to four decimals in both formats.
double round4(double value);
std::string fixed4(double value);

std::string render(const RunConfig& config, const BuildLog& log, const DatasetStats& stats, Format format);
std::string render(const RunConfig& config, const ScoreReport& report, Format format);
std::string render(const RunConfig& config, const GtProtocolResult& result, Format format);
std::string render(const RunConfig& config, const ModelEvalReport& report, Format format);
std::string render(const RunConfig& config, const RetrievalRanking& ranking, Format format);
std::string render(const RunConfig& config, const CngMatrix& matrix, Format format);
std::string render(const RunConfig& config, const Correlation& corr, Format format);

}  // namespace stylem
