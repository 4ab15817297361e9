#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beacon_forge/beacons.hpp"
#include "beacon_forge/core.hpp"
#include "beacon_forge/keyed_stream.hpp"

namespace beacon_forge {

struct AttackBudget {
  std::uint64_t evaluations = 1;
};

/// Widest d for which the exhaustive bias search (2^d · 2^d hashes) is allowed.
inline constexpr unsigned kExhaustiveWidthCap = 16;

/// h(x, y) for two beacons at a fixed stream index: combine_hash({x, y}, i).
class PairHash {
 public:
  PairHash(const HashSpec& spec, std::uint64_t index);

  Digit operator()(Digit x, Digit y) const;
  unsigned width() const noexcept { return d_; }
  std::uint64_t domain() const noexcept { return std::uint64_t{1} << d_; }

 private:
  unsigned d_;
  unsigned field_bytes_;
  std::uint64_t index_;
};

unsigned hamming_distance(Digit a, Digit b) noexcept;

/// Bit `position` of a d-bit digit, position 0 being the most significant.
inline unsigned output_bit(Digit v, unsigned d, unsigned position) noexcept {
  return static_cast<unsigned>((v >> (d - 1 - position)) & 1u);
}

struct BiasResult {
  Digit x_dagger = 0;
  std::uint64_t residual_count = 0;
};

/// Eve controls beacon 0 and searches every x for the one minimizing
/// |{y : bit `bit_position` of h(x,y) != forced_value}|; ties go to the
/// smallest x. Throws WidthTooLarge above `width_cap`.
BiasResult find_bias_string(const HashSpec& spec, unsigned bit_position, unsigned forced_value,
                            std::uint64_t index = 0, unsigned threads = 1,
                            unsigned width_cap = kExhaustiveWidthCap);

/// `count` distinct values from [0, population) in random order (sparse
/// Fisher-Yates). The first k values do not depend on `count`.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::uint64_t count,
                                                      DeterministicRng& rng);

struct AdaptiveResult {
  Digit x_ddagger = 0;
  unsigned achieved_distance = 0;
  std::uint64_t evaluated = 0;
};

/// Eve has heard y and picks the x minimizing Hamming distance between
/// h(x, y) and z0. A budget covering the whole domain scans every x;
/// otherwise the candidates are sampled without replacement from `rng`.
AdaptiveResult adaptive_target_attack(const HashSpec& spec, Digit y, Digit z0, AttackBudget budget,
                                      std::uint64_t index, DeterministicRng& rng);

struct ForceResult {
  std::optional<Digit> x_star;
  std::uint64_t evaluated = 0;
  /// Smallest masked Hamming distance seen among the evaluated x.
  unsigned best_distance = 0;
};

/// Samples distinct random x (budget.evaluations of them, capped at 2^d) and
/// returns the first whose output bits at `mask` equal `wanted`.
/// Throws MaskWiderThanOutput when mask has more than d positions.
ForceResult budgeted_force_bits(const HashSpec& spec, Digit y, std::span<const unsigned> mask,
                                std::span<const unsigned> wanted, AttackBudget budget, std::uint64_t index,
                                DeterministicRng& rng);

/// Exported attack statistics; see attack_report_json for the schema.
struct AttackReport {
  std::string attack;
  unsigned d = 0;
  std::uint64_t budget = 0;
  std::uint64_t trials = 0;
  double success_rate = 0.0;
  double mean_distance = 0.0;
  std::uint64_t x_values_sampled = 0;
};

struct AdaptiveTrials {
  AttackReport report;
  /// distance_histogram[k] = number of trials whose best distance was k.
  std::vector<std::uint64_t> distance_histogram;
};

/// Monte Carlo over random (h, y, z0): h varies through the stream index fed
/// to the hash. Trial t draws everything from derive_key(seed, t, "attack-trial").
AdaptiveTrials simulate_adaptive_target(unsigned d, std::uint64_t budget, std::uint64_t trials, std::uint64_t seed,
                                        unsigned threads = 1);

/// Forces the m most significant bits to random wanted values.
AttackReport simulate_force_bits(unsigned d, unsigned m, std::uint64_t budget, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = 1);

/// Exhaustive bias attack at stream index `index`; success_rate is the share
/// of honest digits y for which the forced bit takes the forced value.
AttackReport bias_attack_report(unsigned d, unsigned bit_position, unsigned forced_value, std::uint64_t index,
                                unsigned threads = 1);

/// {"attack", "d", "budget", "trials", "success_rate", "mean_distance", "x_values_sampled"}
std::string attack_report_json(const AttackReport& report);

/// Replays a seed-capturing saboteur from its published digits alone. Knows
/// the capture length, reseed length and marker, nothing else.
class Accomplice {
 public:
  Accomplice(SabotageParams params, Alphabet alphabet);

  /// Prediction for the next published digit, or nothing while the beacon
  /// is passing true-random digits through.
  std::optional<Digit> predict_next() const;
  void observe(Digit published);

  SabotageMode mode() const noexcept { return mode_; }

 private:
  SabotageParams params_;
  Alphabet alphabet_;
  SabotageMode mode_ = SabotageMode::Capturing;
  std::vector<Digit> seed_digits_;
  std::optional<KeyedStream> psrg_;
  std::uint64_t next_psrg_ = 0;
  BitHistory bits_;
};

/// Causal predictions for a whole stream: entry i uses digits < i only.
std::vector<std::optional<Digit>> accomplice_predictions(const SabotageParams& params, const Alphabet& alphabet,
                                                         std::span<const Digit> published);

struct PredictorModel {
  /// Dishonest beacons whose strategies the accomplice knows.
  std::vector<BeaconId> dishonest_set;
  /// Where the accomplice sits; fixes which digits it has overheard.
  SpacetimeEvent vantage;
};

/// Accomplice of every dishonest beacon of the scenario, at `vantage`.
PredictorModel accomplice_model(const ValidatedScenario& scenario, const SpacetimeEvent& vantage);

/// Distribution over one resultant digit.
class DigitPrediction {
 public:
  enum class Kind { PointMass, Uniform, Explicit };

  static DigitPrediction point(Digit value, std::uint64_t alphabet);
  static DigitPrediction uniform(std::uint64_t alphabet);
  static DigitPrediction explicit_probabilities(std::vector<double> p);

  Kind kind() const noexcept { return kind_; }
  Digit value() const noexcept { return value_; }
  double probability(Digit d) const;
  double max_probability() const;
  double total() const;
  Digit most_likely() const;

 private:
  Kind kind_ = Kind::Uniform;
  Digit value_ = 0;
  std::uint64_t alphabet_ = 2;
  std::vector<double> p_;
};

/// Per-index distribution of the scenario's resultant as seen by the
/// accomplice: point masses where everything entering R(i) is known or
/// forced, uniform where an unheard independent digit enters.
std::vector<DigitPrediction> predict_sequence(const PredictorModel& model, const ValidatedScenario& scenario,
                                              std::span<const DigitRecord> ledger);

}  // namespace beacon_forge
