#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "beacon_forge/core.hpp"
#include "beacon_forge/keyed_stream.hpp"

namespace beacon_forge {

/// Key of the concealed generator after absorbing a run of true-random digits:
/// SHA-256("beacon-forge.v1.psrg" || BE64(count) || BE64(digit)...).
Key psrg_key_from_digits(std::span<const Digit> digits);

/// Stream key of beacon b's true-random generator.
Key trg_key(const ValidatedScenario& scenario, BeaconId b);

/// Marker for a sabotaged beacon: configured, else the top 40 bits of the
/// beacon's "marker" derived key.
std::uint64_t resolve_marker(const ValidatedScenario& scenario, BeaconId b);
SabotageParams resolved_sabotage(const ValidatedScenario& scenario, BeaconId b);

/// Target sequence z(0..L-1) for beacon b: configured, else drawn from the
/// beacon's "target" keyed stream.
std::vector<Digit> resolve_target(const ValidatedScenario& scenario, BeaconId b);

class HonestBeacon {
 public:
  HonestBeacon(const Key& stream_key, Alphabet alphabet, std::size_t length);

  /// Throws StreamExhausted once `length` digits have been emitted.
  Digit next_digit();
  Digit digit_at(std::size_t i) const { return stream_.digit(i, alphabet_.size()); }
  std::size_t counter() const noexcept { return counter_; }

 private:
  KeyedStream stream_;
  Alphabet alphabet_;
  std::size_t length_;
  std::size_t counter_ = 0;
};

/// Trailing window of the emitted bit stream. Digits are serialized
/// most-significant bit first at a fixed width of ceil(log2 ℓ) bits.
class BitHistory {
 public:
  explicit BitHistory(unsigned symbol_bits) : symbol_bits_(symbol_bits) {}

  /// Appends a digit. With `scan` set, reports whether any 40-bit window
  /// ending inside this digit equals `marker` (overlapping scan).
  bool push(Digit d, bool scan, std::uint64_t marker) noexcept;

 private:
  unsigned symbol_bits_;
  std::uint64_t window_ = 0;
  std::uint64_t bits_seen_ = 0;
};

enum class SabotageMode { Capturing, Pseudorandom, Reseeding };
const char* to_string(SabotageMode m) noexcept;

/// TRG hardware with a concealed PSRG: emits the first capture_length TRG
/// digits verbatim, then keys the PSRG from them. A marker in the emitted
/// stream announces reseed_length TRG digits that rekey the PSRG.
class SabotagedBeacon {
 public:
  /// params.marker must be set (see resolved_sabotage).
  SabotagedBeacon(HonestBeacon trg, SabotageParams params, Alphabet alphabet, std::size_t length);

  Digit next_digit();

  SabotageMode mode() const noexcept { return mode_; }
  /// Mode under which the most recent digit was produced.
  SabotageMode last_mode() const noexcept { return last_mode_; }
  std::size_t reseed_remaining() const noexcept { return reseed_remaining_; }
  std::size_t marker_firings() const noexcept { return firings_; }
  std::size_t counter() const noexcept { return index_; }

 private:
  HonestBeacon trg_;
  SabotageParams params_;
  Alphabet alphabet_;
  std::size_t length_;
  std::size_t index_ = 0;
  SabotageMode mode_ = SabotageMode::Capturing;
  SabotageMode last_mode_ = SabotageMode::Capturing;
  std::vector<Digit> absorbed_;
  std::optional<KeyedStream> psrg_;
  std::uint64_t psrg_counter_ = 0;
  std::size_t reseed_remaining_ = 0;
  std::size_t firings_ = 0;
  BitHistory history_;
};

/// Colluder that forces R_XOR(i) = z(i) whenever it has overheard every other
/// beacon's index-i digit; otherwise it emits its seeded fallback digit.
class AdaptiveBeacon {
 public:
  AdaptiveBeacon(BeaconId self, std::size_t beacon_count, Alphabet alphabet, std::vector<Digit> target,
                 const Key& fallback_key);

  /// `overheard` holds the index-i records available in this beacon's past
  /// cone; records for other indices are ignored.
  Digit next_digit(std::span<const DigitRecord> overheard);

  bool last_forced() const noexcept { return last_forced_; }
  std::size_t counter() const noexcept { return index_; }

 private:
  BeaconId self_;
  std::size_t beacon_count_;
  Alphabet alphabet_;
  std::vector<Digit> target_;
  KeyedStream fallback_;
  std::size_t index_ = 0;
  bool last_forced_ = false;
};

/// Optional replacement of the digit a beacon emits (beacon, index) -> digit.
/// The generator itself is not informed; used to perturb honest streams.
using DigitOverride = std::function<std::optional<Digit>(BeaconId, std::size_t)>;

/// Runs every emission in global time order (ties by beacon index). Each
/// adaptive beacon receives the index-i records in its past light cone.
/// Returns the n·L ledger in emission order.
std::vector<DigitRecord> run_emission_schedule(const ValidatedScenario& scenario,
                                               const DigitOverride& override_digit = {});

/// Ledger CSV: header `beacon_id,stream_index,digit,position,time`.
void write_ledger_csv(std::ostream& out, std::span<const DigitRecord> ledger);

}  // namespace beacon_forge
