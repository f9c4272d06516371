#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradflow {

/// Failure categories surfaced by the library. The CLI maps each to a JSON
/// error record and a nonzero exit status.
enum class ErrorKind {
  InvalidArgument,
  DomainTooSmall,
  DomainOverflow,
  CflViolation,
  InvalidFrame,
  GridMismatch,
  NotAHump,
  OrbitEscaped,
  InvalidWindow,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DomainTooSmall: return "domain-too-small";
    case ErrorKind::DomainOverflow: return "domain-overflow";
    case ErrorKind::CflViolation: return "cfl-violation";
    case ErrorKind::InvalidFrame: return "invalid-frame";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::NotAHump: return "not-a-hump";
    case ErrorKind::OrbitEscaped: return "orbit-escaped";
    case ErrorKind::InvalidWindow: return "invalid-window";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace gradflow
