#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdcone {

enum class ErrorCode {
  DimMismatch,
  SpectralFailure,
  NotPsd,
  NotHermitian,
  NonFinite,
  DimensionCap,
  RankOutOfRange,
  GenerationFailure,
  GramHasNegativeEntry,
  NotInOrthant,
  ResidualTooHigh,
  ArityError,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::SpectralFailure: return "SpectralFailure";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::GramHasNegativeEntry: return "GramHasNegativeEntry";
    case ErrorCode::NotInOrthant: return "NotInOrthant";
    case ErrorCode::ResidualTooHigh: return "ResidualTooHigh";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Library-wide exception. The message is prefixed with the code name so that
/// `what()` alone is enough for a CLI diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(code_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psdcone
