#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beacon_forge {

using Digit = std::uint64_t;
using BeaconId = std::size_t;

/// Signal speed; all geometry is in units where c = 1.
inline constexpr double kSignalSpeed = 1.0;

/// Largest supported alphabet (digits must fit the 32-bit hash field width).
inline constexpr std::uint64_t kMaxAlphabet = std::uint64_t{1} << 32;

class Alphabet {
 public:
  /// Throws AlphabetTooSmall for size < 2, AlphabetTooLarge above kMaxAlphabet.
  explicit Alphabet(std::uint64_t size);

  std::uint64_t size() const noexcept { return size_; }
  /// d with 2^d == size, present only for power-of-two alphabets.
  std::optional<unsigned> bit_width() const noexcept { return bit_width_; }
  /// Width of one digit in the serialized bit stream: ceil(log2 size).
  unsigned symbol_bits() const noexcept { return symbol_bits_; }
  bool contains(Digit d) const noexcept { return d < size_; }
  double log2_size() const noexcept;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::uint64_t size_;
  std::optional<unsigned> bit_width_;
  unsigned symbol_bits_;
};

/// A point in 1-D spacetime. Construct through make_event to get the
/// finiteness check.
struct SpacetimeEvent {
  double position = 0.0;
  double time = 0.0;

  friend bool operator==(const SpacetimeEvent&, const SpacetimeEvent&) = default;
};

/// Throws InvalidEvent on NaN or infinite coordinates.
SpacetimeEvent make_event(double position, double time);

enum class Honesty { Honest, SabotagedPsrg, AdaptiveColluder };
enum class CombinerKind { Xor, TimeSharing, Hash };

const char* to_string(Honesty h) noexcept;
const char* to_string(CombinerKind c) noexcept;

inline constexpr unsigned kMarkerBits = 40;
inline constexpr std::uint64_t kMarkerMask = (std::uint64_t{1} << kMarkerBits) - 1;

struct SabotageParams {
  std::size_t capture_length = 256;
  /// 40-bit marker; derived from the saboteur's key when absent.
  std::optional<std::uint64_t> marker;
  std::size_t reseed_length = 200;

  friend bool operator==(const SabotageParams&, const SabotageParams&) = default;
};

struct AdaptiveParams {
  /// Sequence the colluder forces the XOR resultant onto. Empty means it is
  /// drawn from the beacon's "target" keyed stream.
  std::vector<Digit> target;

  friend bool operator==(const AdaptiveParams&, const AdaptiveParams&) = default;
};

struct BeaconSpec {
  double position = 0.0;
  double phase_offset = 0.0;
  double period = 1.0;
  Honesty honesty = Honesty::Honest;
  SabotageParams sabotage;  // read only when honesty == SabotagedPsrg
  AdaptiveParams adaptive;  // read only when honesty == AdaptiveColluder

  friend bool operator==(const BeaconSpec&, const BeaconSpec&) = default;
};

enum class AttackKind { AdaptiveTarget, ForceBits, Bias };
const char* to_string(AttackKind k) noexcept;

/// Parameters for the attack-hash experiment.
struct AttackConfig {
  AttackKind kind = AttackKind::AdaptiveTarget;
  /// Hash evaluations per trial; defaults to 2^d (adaptive) or 2^m (force).
  std::optional<std::uint64_t> budget;
  unsigned mask_bits = 0;     // force-bits: the m most significant output bits
  unsigned bit_position = 0;  // bias: 0 is the most significant output bit
  unsigned forced_value = 0;  // bias

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

struct HashSpec {
  std::string algorithm = "sha256";
  /// Truncation width d. Zero in a raw scenario means "take it from the alphabet".
  unsigned output_bits = 0;
  std::optional<AttackConfig> attack;

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

/// Native digest width of the supported hash, in bits.
inline constexpr unsigned kSha256Bits = 256;

struct Scenario {
  Alphabet alphabet{2};
  std::vector<BeaconSpec> beacons;
  std::size_t length = 1;
  CombinerKind combiner = CombinerKind::Xor;
  std::optional<HashSpec> hash_spec;
  std::uint64_t master_seed = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct DigitRecord {
  BeaconId beacon = 0;
  std::size_t stream_index = 0;
  Digit digit = 0;
  SpacetimeEvent event;

  friend bool operator==(const DigitRecord&, const DigitRecord&) = default;
};

/// A scenario whose invariants have been checked, with the n·L emission
/// event table precomputed. Immutable.
class ValidatedScenario {
 public:
  const Scenario& raw() const noexcept { return scenario_; }
  const Alphabet& alphabet() const noexcept { return scenario_.alphabet; }
  std::size_t beacon_count() const noexcept { return scenario_.beacons.size(); }
  std::size_t length() const noexcept { return scenario_.length; }
  CombinerKind combiner() const noexcept { return scenario_.combiner; }
  std::uint64_t master_seed() const noexcept { return scenario_.master_seed; }
  const BeaconSpec& beacon(BeaconId b) const { return scenario_.beacons.at(b); }
  const std::vector<BeaconSpec>& beacons() const noexcept { return scenario_.beacons; }
  const HashSpec& hash_spec() const;

  /// E(i, b): time is phase_offset + i·period exactly.
  const SpacetimeEvent& emission(BeaconId b, std::size_t i) const;
  /// Beacon-major table of all n·L emission events.
  std::span<const SpacetimeEvent> emission_table() const noexcept { return events_; }

  std::vector<BeaconId> dishonest() const;
  bool is_dishonest(BeaconId b) const { return beacon(b).honesty != Honesty::Honest; }

  /// Same scenario under a different master seed (re-validated).
  ValidatedScenario with_seed(std::uint64_t seed) const;

  friend bool operator==(const ValidatedScenario& a, const ValidatedScenario& b) {
    return a.scenario_ == b.scenario_;
  }

 private:
  friend ValidatedScenario validate_scenario(Scenario raw);
  ValidatedScenario() = default;

  Scenario scenario_;
  std::vector<SpacetimeEvent> events_;
};

/// Checks every scenario invariant; throws Error with EmptyBeaconSet,
/// InvalidLength, NonPositivePeriod, InvalidEvent, HashNeedsPowerOfTwo,
/// UnsupportedHash or InvalidStrategy.
ValidatedScenario validate_scenario(Scenario raw);

}  // namespace beacon_forge
