#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pol {

enum class ErrorCode {
  OutOfHorizon,
  AlphabetMismatch,
  InvalidSymbol,
  CapExceeded,
  LTooSmall,
  InvalidPartition,
  UndecidableAtHorizon,
  NonpositiveWeight,
  DivergenceTooSlow,
  DomainError,
  EpsilonTooLarge,
  PrefixTooShort,
  DimensionMismatch,
  InfeasibleSpec,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pol
