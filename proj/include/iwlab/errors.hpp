#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwlab {

enum class ErrorCode {
  InvalidArgument,
  NonUnit,
  NotMonic,
  ZeroAtPrecision,
  LevelTooLarge,
  LevelOrder,
  NotFoundWithinCap,
  PrecisionExhausted,
  InfiniteQuotient,
  NoExactFit,
  SearchExhausted,
  NotVisibleWithinRange,
  PostFireViolation,
  EnumerationCapExceeded,
  InternalInvariant,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::ZeroAtPrecision: return "ZeroAtPrecision";
    case ErrorCode::LevelTooLarge: return "LevelTooLarge";
    case ErrorCode::LevelOrder: return "LevelOrder";
    case ErrorCode::NotFoundWithinCap: return "NotFoundWithinCap";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::InfiniteQuotient: return "InfiniteQuotient";
    case ErrorCode::NoExactFit: return "NoExactFit";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NotVisibleWithinRange: return "NotVisibleWithinRange";
    case ErrorCode::PostFireViolation: return "PostFireViolation";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace iwlab
