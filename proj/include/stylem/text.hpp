#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylem {

// A token is a non-empty lowercase alphanumeric string (UTF-8).
using Token = std::string;
using TokenSeq = std::vector<Token>;

inline constexpr int kMaxOrder = 4;

// Identifies the normalization rule; stored in index manifests so that an
// index is never queried with captions tokenized differently.
inline constexpr std::string_view kTokenizerId = "lower-alnum-split/1";

// Lowercases, replaces every non-alphanumeric code point with a space and
// splits on whitespace. Input is decoded as UTF-8; invalid bytes are dropped.
TokenSeq tokenize(std::string_view text);

// Throws Error(usage) unless 1 <= order <= kMaxOrder.
void check_order(int order);

// Contiguous run of 1..4 tokens. Stored as the tokens joined by single
// spaces, which is unambiguous because tokens never contain whitespace.
class Ngram {
 public:
  explicit Ngram(std::span<const Token> tokens);

  // Builds from an already-joined key such as "happy dog".
  static Ngram from_key(std::string key);

  const std::string& key() const noexcept { return key_; }
  int order() const noexcept { return order_; }
  TokenSeq tokens() const;

  friend bool operator==(const Ngram&, const Ngram&) = default;
  friend auto operator<=>(const Ngram& a, const Ngram& b) { return a.key_ <=> b.key_; }

 private:
  Ngram(std::string key, int order) : key_(std::move(key)), order_(order) {}

  std::string key_;
  int order_ = 0;
};

// All contiguous windows of length `order`, duplicates retained, in
// sequence order. Empty when the sequence is shorter than `order`.
std::vector<Ngram> extract_ngrams(std::span<const Token> tokens, int order);

// Writes the joined key of tokens[pos, pos+order) into `out` (reusing its
// buffer). Hot-path helper for index lookups.
void ngram_key(std::span<const Token> tokens, std::size_t pos, int order, std::string& out);

}  // namespace stylem
