#include "clothgrasp/errors.hpp"

namespace clothgrasp {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return "Parameter";
    case ErrorKind::kDegenerateInput: return "DegenerateInput";
    case ErrorKind::kNoCandidates: return "NoCandidates";
    case ErrorKind::kInsufficientPoints: return "InsufficientPoints";
    case ErrorKind::kNoInnerEdge: return "NoInnerEdge";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kInvalidDepth: return "InvalidDepth";
    case ErrorKind::kFormat: return "Format";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ToString(kind)) + ": " + message), kind_(kind) {}

void Throw(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace clothgrasp
