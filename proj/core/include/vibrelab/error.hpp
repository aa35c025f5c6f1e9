#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vibrelab {

/// Machine-readable failure category. The enumerator name is what the CLI
/// prints, so keep names stable.
enum class Errc {
  InvalidSignal,
  NonFiniteSample,
  LengthMismatch,
  RateMismatch,
  UnitMismatch,
  NegativeInput,
  NonFiniteScalar,
  InvalidModel,
  NyquistViolation,
  NonPositiveDuration,
  InvalidSensor,
  InvalidAdc,
  NonPositiveMass,
  ChannelOutOfRange,
  TooShort,
  EmptySpectrum,
  InvalidFilter,
  CutoffAboveNyquist,
  SignalShorterThanFilter,
  InsufficientPeaks,
  MalformedDocument,
  UnknownBlock,
  InvalidParams,
  SourceNotFound,
  FileNotFound,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace vibrelab
