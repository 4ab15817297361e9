#include "beacon_forge/spacetime.hpp"

#include <cmath>

#include "beacon_forge/error.hpp"

namespace beacon_forge {

const char* to_string(IntervalKind k) noexcept {
  switch (k) {
    case IntervalKind::Spacelike: return "spacelike";
    case IntervalKind::Timelike: return "timelike";
    case IntervalKind::Lightlike: return "lightlike";
  }
  return "?";
}

IntervalKind classify_interval(const SpacetimeEvent& a, const SpacetimeEvent& b, double tolerance) noexcept {
  const double dt = kSignalSpeed * (b.time - a.time);
  const double dx = b.position - a.position;
  const double discriminant = dt * dt - dx * dx;
  if (std::abs(discriminant) <= tolerance) return IntervalKind::Lightlike;
  return discriminant < 0 ? IntervalKind::Spacelike : IntervalKind::Timelike;
}

bool in_forward_cone(const SpacetimeEvent& source, const SpacetimeEvent& target, double tolerance) noexcept {
  if (classify_interval(source, target, tolerance) == IntervalKind::Spacelike) return false;
  // Timelike or lightlike: inside the forward cone iff not in the past one.
  return target.time - source.time >= -tolerance;
}

bool all_pairs_spacelike(const ValidatedScenario& s) {
  const std::size_t n = s.beacon_count();
  for (BeaconId a = 0; a < n; ++a) {
    for (BeaconId b = a + 1; b < n; ++b) {
      for (std::size_t i = 0; i < s.length(); ++i) {
        if (classify_interval(s.emission(a, i), s.emission(b, i)) != IntervalKind::Spacelike) return false;
      }
    }
  }
  return true;
}

double availability_time(const SpacetimeEvent& emission, double observer_position, double speed) {
  if (!(speed > 0.0) || speed > kSignalSpeed) {
    fail(ErrorCode::InvalidSpeed, "propagation speed must satisfy 0 < v <= c");
  }
  return emission.time + std::abs(observer_position - emission.position) / speed;
}

std::vector<DigitRecord> past_cone_digits(std::span<const DigitRecord> ledger, const SpacetimeEvent& observer) {
  std::vector<DigitRecord> out;
  for (const DigitRecord& r : ledger) {
    if (in_forward_cone(r.event, observer)) out.push_back(r);
  }
  return out;
}

bool can_compute_resultant(const ValidatedScenario& s, const SpacetimeEvent& observer, std::size_t i) {
  if (i >= s.length()) fail(ErrorCode::IndexOutOfRange, "stream index " + std::to_string(i));
  for (BeaconId b = 0; b < s.beacon_count(); ++b) {
    if (!in_forward_cone(s.emission(b, i), observer)) return false;
  }
  return true;
}

bool in_predictability_gap(const ValidatedScenario& s, const SpacetimeEvent& observer, std::size_t i) {
  if (i >= s.length()) fail(ErrorCode::IndexOutOfRange, "stream index " + std::to_string(i));
  if (s.dishonest().empty()) fail(ErrorCode::NoDishonestBeacons, "predictability gap needs a dishonest beacon");
  bool misses_dishonest = false;
  for (BeaconId b = 0; b < s.beacon_count(); ++b) {
    const bool inside = in_forward_cone(s.emission(b, i), observer);
    if (!s.is_dishonest(b) && !inside) return false;
    if (s.is_dishonest(b) && !inside) misses_dishonest = true;
  }
  return misses_dishonest;
}

bool hears_all_others(const ValidatedScenario& s, BeaconId b, std::size_t i) {
  const SpacetimeEvent& self = s.emission(b, i);
  for (BeaconId other = 0; other < s.beacon_count(); ++other) {
    if (other == b) continue;
    const SpacetimeEvent& e = s.emission(other, i);
    if (!in_forward_cone(e, self)) return false;
    // Same instant: the schedule emits the lower index first.
    if (e.time == self.time && other > b) return false;
  }
  return true;
}

}  // namespace beacon_forge
