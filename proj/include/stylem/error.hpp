#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stylem {

enum class ErrorKind {
  usage,       // bad arguments or preconditions violated by the caller
  io,          // file missing or unreadable/unwritable
  parse,       // malformed input row
  validation,  // well-formed input that violates a data invariant
  version,     // index file written by an incompatible format version
  checksum,    // index file truncated or corrupted
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stylem
