#include "pol/error.hpp"

namespace pol {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::LTooSmall: return "LTooSmall";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::UndecidableAtHorizon: return "UndecidableAtHorizon";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::DivergenceTooSlow: return "DivergenceTooSlow";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::PrefixTooShort: return "PrefixTooShort";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace pol
