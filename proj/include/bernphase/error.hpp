#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bernphase {

enum class ErrorKind {
  NonPositiveWeight,
  NotNormalized,
  AlphabetMismatch,
  ParameterOutOfRange,
  AtomBudgetExceeded,
  DegenerateWindow,
  Overflow,
  DepthBudget,
  OutOfDepth,
  SpecMismatch,
  InvalidInput,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::AtomBudgetExceeded: return "AtomBudgetExceeded";
    case ErrorKind::DegenerateWindow: return "DegenerateWindow";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DepthBudget: return "DepthBudget";
    case ErrorKind::OutOfDepth: return "OutOfDepth";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

  /// Budget-type failures: the computation was valid but too large.
  bool is_budget() const noexcept {
    return kind_ == ErrorKind::AtomBudgetExceeded || kind_ == ErrorKind::DepthBudget ||
           kind_ == ErrorKind::Overflow;
  }

 private:
  ErrorKind kind_;
  std::string message_;
};

namespace detail {
[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require_unit_interval(double t, std::string_view name) {
  if (!(t >= 0.0 && t <= 1.0)) {
    fail(ErrorKind::ParameterOutOfRange,
         std::string(name) + " must lie in [0,1], got " + std::to_string(t));
  }
}
}  // namespace detail

}  // namespace bernphase
