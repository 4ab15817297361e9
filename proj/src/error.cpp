#include "beacon_forge/error.hpp"

namespace beacon_forge {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
    case ErrorCode::AlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorCode::HashNeedsPowerOfTwo: return "HashNeedsPowerOfTwo";
    case ErrorCode::EmptyBeaconSet: return "EmptyBeaconSet";
    case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::InvalidEvent: return "InvalidEvent";
    case ErrorCode::InvalidStrategy: return "InvalidStrategy";
    case ErrorCode::UnsupportedHash: return "UnsupportedHash";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidSpeed: return "InvalidSpeed";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoDishonestBeacons: return "NoDishonestBeacons";
    case ErrorCode::StreamExhausted: return "StreamExhausted";
    case ErrorCode::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorCode::MissingRecord: return "MissingRecord";
    case ErrorCode::AlphabetNotPowerOfTwo: return "AlphabetNotPowerOfTwo";
    case ErrorCode::WidthTooLarge: return "WidthTooLarge";
    case ErrorCode::MaskWiderThanOutput: return "MaskWiderThanOutput";
    case ErrorCode::InvalidBudget: return "InvalidBudget";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_scenario_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AlphabetTooSmall:
    case ErrorCode::AlphabetTooLarge:
    case ErrorCode::HashNeedsPowerOfTwo:
    case ErrorCode::EmptyBeaconSet:
    case ErrorCode::NonPositivePeriod:
    case ErrorCode::InvalidLength:
    case ErrorCode::InvalidEvent:
    case ErrorCode::InvalidStrategy:
    case ErrorCode::UnsupportedHash:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace beacon_forge
