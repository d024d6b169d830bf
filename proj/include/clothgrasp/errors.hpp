#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clothgrasp {

enum class ErrorKind {
  kParameter,
  kDegenerateInput,
  kNoCandidates,
  kInsufficientPoints,
  kNoInnerEdge,
  kZeroVector,
  kInvalidDepth,
  kFormat,
  kIo,
};

std::string_view ToString(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// that callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Throw(ErrorKind kind, const std::string& message);

}  // namespace clothgrasp
