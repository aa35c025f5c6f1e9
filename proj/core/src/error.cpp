#include "vibrelab/error.hpp"

namespace vibrelab {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidSignal: return "InvalidSignal";
    case Errc::NonFiniteSample: return "NonFiniteSample";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::RateMismatch: return "RateMismatch";
    case Errc::UnitMismatch: return "UnitMismatch";
    case Errc::NegativeInput: return "NegativeInput";
    case Errc::NonFiniteScalar: return "NonFiniteScalar";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::NyquistViolation: return "NyquistViolation";
    case Errc::NonPositiveDuration: return "NonPositiveDuration";
    case Errc::InvalidSensor: return "InvalidSensor";
    case Errc::InvalidAdc: return "InvalidAdc";
    case Errc::NonPositiveMass: return "NonPositiveMass";
    case Errc::ChannelOutOfRange: return "ChannelOutOfRange";
    case Errc::TooShort: return "TooShort";
    case Errc::EmptySpectrum: return "EmptySpectrum";
    case Errc::InvalidFilter: return "InvalidFilter";
    case Errc::CutoffAboveNyquist: return "CutoffAboveNyquist";
    case Errc::SignalShorterThanFilter: return "SignalShorterThanFilter";
    case Errc::InsufficientPeaks: return "InsufficientPeaks";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::UnknownBlock: return "UnknownBlock";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::SourceNotFound: return "SourceNotFound";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace vibrelab
