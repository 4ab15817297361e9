#pragma once

#include <stdexcept>
#include <string>

namespace beacon_forge {

enum class ErrorCode {
  // scenario validation
  AlphabetTooSmall,
  AlphabetTooLarge,
  HashNeedsPowerOfTwo,
  EmptyBeaconSet,
  NonPositivePeriod,
  InvalidLength,
  InvalidEvent,
  InvalidStrategy,
  UnsupportedHash,
  // configuration / IO
  ConfigParse,
  Io,
  // spacetime
  InvalidSpeed,
  IndexOutOfRange,
  NoDishonestBeacons,
  // beacons and combiners
  StreamExhausted,
  DigitOutOfRange,
  MissingRecord,
  AlphabetNotPowerOfTwo,
  // adversary
  WidthTooLarge,
  MaskWiderThanOutput,
  InvalidBudget,
  // entropy
  EmptyDistribution,
  EnumerationTooLarge,
  InvalidCounts,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// True for the codes that describe a malformed or inconsistent scenario.
bool is_scenario_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace beacon_forge
