#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdsmds {

enum class ErrorCode {
  kNotHermitian,
  kNoConvergence,
  kInvalidCounts,
  kDegenerateLayout,
  kZeroDistance,
  kOutOfRange,
  kZeroEdge,
  kMissingField,
  kRankDeficient,
  kDegenerateGauge,
  kSingularSystem,
  kDegenerateReference,
  kShapeMismatch,
  kConfigError,
  kEmptyDataset,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying
/// a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInvalidCounts: return "InvalidCounts";
    case ErrorCode::kDegenerateLayout: return "DegenerateLayout";
    case ErrorCode::kZeroDistance: return "ZeroDistance";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kZeroEdge: return "ZeroEdge";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateGauge: return "DegenerateGauge";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kDegenerateReference: return "DegenerateReference";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
  }
  return "Unknown";
}

}  // namespace qdsmds
