#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "beacon_forge/core.hpp"

namespace beacon_forge {

/// Generalized XOR: (Σ digits) mod ℓ. Throws DigitOutOfRange.
Digit combine_xor(std::span<const Digit> digits, const Alphabet& alphabet);

/// R_TS(i) = digit of beacon (i mod n) at index i, beacons indexed from 0.
/// Throws MissingRecord when the ledger lacks that record.
Digit combine_time_sharing(std::span<const DigitRecord> ledger, std::size_t i, std::size_t beacon_count);

/// Hash input: BE64(i) followed by each digit as a big-endian field of
/// ceil(d/8) bytes, beacons in index order.
std::vector<std::uint8_t> hash_encoding(std::uint64_t i, std::span<const Digit> digits, unsigned output_bits);

/// First d bits (most significant first) of SHA-256 over hash_encoding.
/// Throws AlphabetNotPowerOfTwo when the spec has no usable width and
/// DigitOutOfRange for digits wider than d bits.
Digit combine_hash(std::span<const Digit> digits, std::uint64_t i, const HashSpec& spec);

/// Digits of a complete ledger arranged as [beacon][index].
class DigitMatrix {
 public:
  DigitMatrix(const ValidatedScenario& scenario, std::span<const DigitRecord> ledger);

  Digit at(BeaconId b, std::size_t i) const { return digits_[b * length_ + i]; }
  /// All n digits of index i, in beacon order.
  std::vector<Digit> column(std::size_t i) const;
  std::size_t beacon_count() const noexcept { return beacons_; }
  std::size_t length() const noexcept { return length_; }

 private:
  std::size_t beacons_;
  std::size_t length_;
  std::vector<Digit> digits_;
};

Digit combine_at(const ValidatedScenario& scenario, CombinerKind kind, std::span<const Digit> column, std::size_t i);

/// Resultant sequence R(0..L-1) under the given combiner.
std::vector<Digit> resultant_sequence(const ValidatedScenario& scenario, std::span<const DigitRecord> ledger,
                                      CombinerKind kind);

/// CSV with one row per index: `stream_index,xor,time_sharing,hash`. The hash
/// column is empty unless the scenario uses the hash combiner.
void write_resultant_csv(std::ostream& out, const ValidatedScenario& scenario, std::span<const DigitRecord> ledger);

}  // namespace beacon_forge
