#pragma once

// Causality queries in one spatial dimension with c = 1. Cones are closed:
// an event on the light cone boundary counts as inside, and a signal moving
// at exactly c arrives.

#include <span>
#include <vector>

#include "beacon_forge/core.hpp"

namespace beacon_forge {

enum class IntervalKind { Spacelike, Timelike, Lightlike };

const char* to_string(IntervalKind k) noexcept;

/// Absolute tolerance on (Δt)² − (Δx)² for the lightlike band.
inline constexpr double kLightlikeTolerance = 1e-12;

IntervalKind classify_interval(const SpacetimeEvent& a, const SpacetimeEvent& b,
                               double tolerance = kLightlikeTolerance) noexcept;

/// True when `target` lies inside or on the forward light cone of `source`.
bool in_forward_cone(const SpacetimeEvent& source, const SpacetimeEvent& target,
                     double tolerance = kLightlikeTolerance) noexcept;

/// True iff E(i,a) and E(i,b) are spacelike for every pair a != b and every i.
bool all_pairs_spacelike(const ValidatedScenario& scenario);

/// Earliest time a digit emitted at `emission` is known at `observer_position`
/// for a signal travelling at speed 0 < v <= 1. Throws InvalidSpeed otherwise.
double availability_time(const SpacetimeEvent& emission, double observer_position, double speed = kSignalSpeed);

/// Records whose emission lies in or on the observer's past light cone.
std::vector<DigitRecord> past_cone_digits(std::span<const DigitRecord> ledger, const SpacetimeEvent& observer);

/// Observer has every beacon's index-i digit in its past cone.
bool can_compute_resultant(const ValidatedScenario& scenario, const SpacetimeEvent& observer, std::size_t i);

/// Observer sees every honest index-i digit but misses at least one dishonest
/// one. Throws NoDishonestBeacons when the scenario has none.
bool in_predictability_gap(const ValidatedScenario& scenario, const SpacetimeEvent& observer, std::size_t i);

/// Whether beacon b's index-i emission has every other beacon's index-i
/// emission in its past cone, with simultaneous co-located emissions ordered
/// by beacon index. This is the condition under which an adaptive colluder
/// can force the XOR resultant.
bool hears_all_others(const ValidatedScenario& scenario, BeaconId b, std::size_t i);

}  // namespace beacon_forge
