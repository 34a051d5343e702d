#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewlqu {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  NotPSD,
  DimensionMismatch,
  InvalidChannel,
  InvalidState,
  DegenerateSpectrum,
  ParseError,
  IoError,
  UsageError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace skewlqu
