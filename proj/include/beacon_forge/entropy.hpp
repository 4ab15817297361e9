#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beacon_forge/core.hpp"

namespace beacon_forge {

enum class Provenance { ExactEnumeration, Analytic, Empirical };
const char* to_string(Provenance p) noexcept;

/// Summary of one equally-informed viewpoint inside a mixture, e.g. one
/// particular dishonest subset when the subset is drawn at random.
struct MixtureComponent {
  double weight = 0.0;
  double shannon_bits = 0.0;
  double max_probability = 0.0;
};

/// Distribution over digit sequences of length L. Sequences are stored by
/// their base-ℓ code (digit i has weight ℓ^i), sorted by code.
struct SequenceDistribution {
  std::uint64_t alphabet = 2;
  std::size_t length = 0;
  std::vector<std::pair<std::uint64_t, double>> support;
  Provenance provenance = Provenance::ExactEnumeration;
  std::vector<MixtureComponent> components;

  std::vector<Digit> decode(std::uint64_t code) const;
  double total() const;
};

/// Throws EnumerationTooLarge when ℓ^L does not fit a 63-bit code.
std::uint64_t encode_sequence(std::span<const Digit> digits, std::uint64_t alphabet);

/// Builds a distribution from explicit (sequence, probability) pairs; equal
/// sequences are merged.
SequenceDistribution make_distribution(const std::vector<std::pair<std::vector<Digit>, double>>& entries,
                                       std::uint64_t alphabet, Provenance provenance);

/// −log2 of the largest probability. Throws EmptyDistribution.
double min_entropy_exact(const SequenceDistribution& dist);
/// −Σ p log2 p with 0·log 0 = 0. Throws EmptyDistribution.
double shannon_entropy(const SequenceDistribution& dist);
/// Σ_c w_c · H(component c): the Shannon entropy left once the viewpoint is
/// fixed. Equals shannon_entropy for a distribution without components.
double conditional_shannon_entropy(const SequenceDistribution& dist);

enum class Protocol { Xor, TimeSharing, Hash, SingleBeacon };
const char* to_string(Protocol p) noexcept;

struct ProtocolChoice {
  Protocol kind = Protocol::Xor;
  /// Which beacon, for Protocol::SingleBeacon.
  BeaconId beacon = 0;
};

ProtocolChoice protocol_of(CombinerKind combiner) noexcept;

enum class SubsetKnowledge {
  /// The dishonest beacons are the scenario's non-honest ones and the
  /// adversary knows which they are.
  Known,
  /// k beacons drawn uniformly at random; the distribution mixes all subsets.
  RandomUnknown,
};

struct SabotageModel {
  std::size_t k = 0;
  SubsetKnowledge knowledge = SubsetKnowledge::Known;
};

inline constexpr std::uint64_t kEnumerationCap = 10'000'000;

/// Exact distribution of the resultant sequence as seen by the dishonest
/// side. Honest digits are enumerated uniformly. A dishonest beacon emits its
/// predetermined target digit z(i), except under XOR when it has every other
/// index-i digit in its past cone, where it forces R(i) = z(i).
/// Throws EnumerationTooLarge, InvalidCounts.
SequenceDistribution resultant_distribution(const ValidatedScenario& scenario, ProtocolChoice protocol,
                                            SabotageModel model);

/// −log2(k/n + (1 − k/n)·ℓ^−L) / L. Throws InvalidCounts.
double single_beacon_min_entropy(std::size_t n, std::size_t k, std::uint64_t alphabet, std::size_t length);

/// Per-character min entropies in units of log ℓ. The timelike column assumes
/// the latest beacon is dishonest with all others in its past cone.
struct Table1 {
  double spacelike_xor = 0.0;
  double spacelike_time_sharing = 0.0;
  double timelike_xor = 0.0;
  double timelike_time_sharing = 0.0;

  friend bool operator==(const Table1&, const Table1&) = default;
};

/// Throws InvalidCounts unless 0 <= k <= n and n >= 1.
Table1 table1(std::size_t n, std::size_t k);

/// `separation,xor,time_sharing` with rows `spacelike` and `timelike_latest_dishonest`.
void write_table1_csv(std::ostream& out, const Table1& table);

enum class Separation { Spacelike, Timelike };

/// n beacons, the last k adaptive colluders. Spacelike: beacons 10 apart
/// emitting simultaneously. Timelike: beacons 1 apart, the last one emitting
/// n time units late so every other beacon is in its past cone.
ValidatedScenario reference_scenario(std::size_t n, std::size_t k, Separation separation, std::uint64_t alphabet,
                                     std::size_t length, CombinerKind combiner = CombinerKind::Xor,
                                     std::uint64_t seed = 0);

struct EntropyReport {
  std::string protocol;
  std::string separation;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t l = 0;
  std::size_t L = 0;
  double min_entropy_per_char_bits = 0.0;
  double shannon_per_char_bits = 0.0;
  Provenance method = Provenance::ExactEnumeration;
};

/// Report from resultant_distribution. For a random subset the Shannon figure
/// is conditional on the subset (see conditional_shannon_entropy).
EntropyReport exact_entropy_report(const ValidatedScenario& scenario, ProtocolChoice protocol, SabotageModel model);

/// Sampled resultant sequences, counted per (subset, sequence).
struct EmpiricalCounts {
  std::uint64_t samples = 0;
  std::uint64_t alphabet = 2;
  std::size_t length = 0;
  /// counts[s] maps sequence code -> count for subset number s.
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> counts;

  /// Merged over subsets, sorted by code.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged() const;
  std::uint64_t max_count() const;
};

/// Monte Carlo sampling in batches of 4096; batch b is driven by
/// derive_key(seed, b, "sample-batch"), so the counts do not depend on how
/// batches are spread over threads.
EmpiricalCounts sample_resultants(const ValidatedScenario& scenario, ProtocolChoice protocol, SabotageModel model,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

/// Plug-in estimates from sample_resultants.
EntropyReport empirical_entropy_report(const ValidatedScenario& scenario, ProtocolChoice protocol,
                                       SabotageModel model, std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads = 1);

/// {"protocol", "separation", "n", "k", "l", "L", "min_entropy_per_char_bits",
///  "shannon_per_char_bits", "method"}
std::string entropy_report_json(const EntropyReport& report);

}  // namespace beacon_forge
