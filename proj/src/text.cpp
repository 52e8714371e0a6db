#include "stylem/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "stylem/error.hpp"

namespace stylem {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::version: return "version";
    case ErrorKind::checksum: return "checksum";
  }
  return "unknown";
}

namespace {

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::string current;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && u_isalnum(c)) {
      append_utf8(current, u_tolower(c));
      continue;
    }
    if (c < 0) continue;  // invalid byte sequence: dropped
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void check_order(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw Error(ErrorKind::usage, "n-gram order must be in 1.." + std::to_string(kMaxOrder) + ", got " +
                                      std::to_string(order));
  }
}

void ngram_key(std::span<const Token> tokens, std::size_t pos, int order, std::string& out) {
  out.clear();
  for (int k = 0; k < order; ++k) {
    if (k > 0) out.push_back(' ');
    out.append(tokens[pos + static_cast<std::size_t>(k)]);
  }
}

Ngram::Ngram(std::span<const Token> tokens) {
  check_order(static_cast<int>(tokens.size()));
  ngram_key(tokens, 0, static_cast<int>(tokens.size()), key_);
  order_ = static_cast<int>(tokens.size());
}

Ngram Ngram::from_key(std::string key) {
  int order = key.empty() ? 0 : 1;
  for (char ch : key) {
    if (ch == ' ') ++order;
  }
  check_order(order);
  return Ngram(std::move(key), order);
}

TokenSeq Ngram::tokens() const {
  TokenSeq out;
  std::size_t start = 0;
  while (true) {
    const auto space = key_.find(' ', start);
    out.push_back(key_.substr(start, space - start));
    if (space == std::string::npos) break;
    start = space + 1;
  }
  return out;
}

std::vector<Ngram> extract_ngrams(std::span<const Token> tokens, int order) {
  check_order(order);
  std::vector<Ngram> out;
  const auto n = static_cast<std::size_t>(order);
  if (tokens.size() < n) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    out.emplace_back(tokens.subspan(i, n));
  }
  return out;
}

}  // namespace stylem
