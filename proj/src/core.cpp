#include "beacon_forge/core.hpp"

#include <bit>
#include <cmath>

#include "beacon_forge/error.hpp"

namespace beacon_forge {

Alphabet::Alphabet(std::uint64_t size) : size_(size) {
  if (size < 2) fail(ErrorCode::AlphabetTooSmall, "alphabet size " + std::to_string(size) + " < 2");
  if (size > kMaxAlphabet) fail(ErrorCode::AlphabetTooLarge, "alphabet size exceeds 2^32");
  if (std::has_single_bit(size)) bit_width_ = static_cast<unsigned>(std::countr_zero(size));
  symbol_bits_ = static_cast<unsigned>(std::bit_width(size - 1));
}

double Alphabet::log2_size() const noexcept { return std::log2(static_cast<double>(size_)); }

SpacetimeEvent make_event(double position, double time) {
  if (!std::isfinite(position) || !std::isfinite(time)) {
    fail(ErrorCode::InvalidEvent, "spacetime coordinates must be finite");
  }
  return SpacetimeEvent{position, time};
}

const char* to_string(Honesty h) noexcept {
  switch (h) {
    case Honesty::Honest: return "honest";
    case Honesty::SabotagedPsrg: return "sabotaged_psrg";
    case Honesty::AdaptiveColluder: return "adaptive_colluder";
  }
  return "?";
}

const char* to_string(CombinerKind c) noexcept {
  switch (c) {
    case CombinerKind::Xor: return "xor";
    case CombinerKind::TimeSharing: return "time_sharing";
    case CombinerKind::Hash: return "hash";
  }
  return "?";
}

const char* to_string(AttackKind k) noexcept {
  switch (k) {
    case AttackKind::AdaptiveTarget: return "adaptive_target";
    case AttackKind::ForceBits: return "force_bits";
    case AttackKind::Bias: return "bias";
  }
  return "?";
}

const HashSpec& ValidatedScenario::hash_spec() const {
  if (!scenario_.hash_spec) fail(ErrorCode::InvalidArgument, "scenario has no hash_spec");
  return *scenario_.hash_spec;
}

const SpacetimeEvent& ValidatedScenario::emission(BeaconId b, std::size_t i) const {
  if (b >= beacon_count()) fail(ErrorCode::IndexOutOfRange, "beacon " + std::to_string(b));
  if (i >= length()) fail(ErrorCode::IndexOutOfRange, "stream index " + std::to_string(i));
  return events_[b * length() + i];
}

std::vector<BeaconId> ValidatedScenario::dishonest() const {
  std::vector<BeaconId> out;
  for (BeaconId b = 0; b < beacon_count(); ++b) {
    if (is_dishonest(b)) out.push_back(b);
  }
  return out;
}

ValidatedScenario ValidatedScenario::with_seed(std::uint64_t seed) const {
  Scenario s = scenario_;
  s.master_seed = seed;
  return validate_scenario(std::move(s));
}

namespace {

void validate_attack(const AttackConfig& a, unsigned d) {
  if (a.budget && *a.budget == 0) fail(ErrorCode::InvalidStrategy, "attack budget must be >= 1");
  if (a.mask_bits > d) fail(ErrorCode::InvalidStrategy, "attack mask_bits exceeds output width");
  if (a.bit_position >= d) fail(ErrorCode::InvalidStrategy, "attack bit_position out of range");
  if (a.forced_value > 1) fail(ErrorCode::InvalidStrategy, "attack forced_value must be 0 or 1");
}

void validate_beacon(const BeaconSpec& b, std::size_t id, const Scenario& s) {
  const std::string who = "beacon " + std::to_string(id);
  if (!std::isfinite(b.position) || !std::isfinite(b.phase_offset) || !std::isfinite(b.period)) {
    fail(ErrorCode::InvalidEvent, who + " has non-finite coordinates");
  }
  if (!(b.period > 0.0)) fail(ErrorCode::NonPositivePeriod, who + " period must be > 0");
  if (!std::isfinite(b.phase_offset + static_cast<double>(s.length - 1) * b.period)) {
    fail(ErrorCode::InvalidEvent, who + " emission times overflow");
  }
  switch (b.honesty) {
    case Honesty::SabotagedPsrg:
      if (b.sabotage.capture_length == 0) fail(ErrorCode::InvalidStrategy, who + " capture_length must be >= 1");
      if (b.sabotage.reseed_length == 0) fail(ErrorCode::InvalidStrategy, who + " reseed_length must be >= 1");
      if (b.sabotage.marker && (*b.sabotage.marker & ~kMarkerMask) != 0) {
        fail(ErrorCode::InvalidStrategy, who + " marker wider than 40 bits");
      }
      break;
    case Honesty::AdaptiveColluder:
      if (!b.adaptive.target.empty()) {
        if (b.adaptive.target.size() != s.length) {
          fail(ErrorCode::InvalidStrategy, who + " target length differs from scenario length");
        }
        for (Digit z : b.adaptive.target) {
          if (!s.alphabet.contains(z)) fail(ErrorCode::InvalidStrategy, who + " target digit outside alphabet");
        }
      }
      break;
    case Honesty::Honest:
      break;
  }
}

}  // namespace

ValidatedScenario validate_scenario(Scenario raw) {
  if (raw.beacons.empty()) fail(ErrorCode::EmptyBeaconSet, "scenario has no beacons");
  if (raw.length == 0) fail(ErrorCode::InvalidLength, "length must be >= 1");
  for (std::size_t b = 0; b < raw.beacons.size(); ++b) validate_beacon(raw.beacons[b], b, raw);

  if (raw.combiner == CombinerKind::Hash) {
    const auto d = raw.alphabet.bit_width();
    if (!d) {
      fail(ErrorCode::HashNeedsPowerOfTwo,
           "hash combiner needs a power-of-two alphabet, got " + std::to_string(raw.alphabet.size()));
    }
    if (!raw.hash_spec) raw.hash_spec = HashSpec{};
    HashSpec& h = *raw.hash_spec;
    if (h.algorithm != "sha256") fail(ErrorCode::UnsupportedHash, "unsupported hash '" + h.algorithm + "'");
    if (h.output_bits == 0) h.output_bits = *d;
    if (h.output_bits != *d) fail(ErrorCode::InvalidStrategy, "hash output_bits must equal alphabet bit width");
    if (h.attack) validate_attack(*h.attack, *d);
  } else if (raw.hash_spec) {
    fail(ErrorCode::InvalidStrategy, "hash_spec is only allowed with the hash combiner");
  }

  ValidatedScenario v;
  v.events_.reserve(raw.beacons.size() * raw.length);
  for (const BeaconSpec& b : raw.beacons) {
    for (std::size_t i = 0; i < raw.length; ++i) {
      v.events_.push_back(make_event(b.position, b.phase_offset + static_cast<double>(i) * b.period));
      if (i > 0 && !(v.events_.back().time > v.events_[v.events_.size() - 2].time)) {
        fail(ErrorCode::InvalidEvent, "period too small to separate consecutive emissions");
      }
    }
  }
  v.scenario_ = std::move(raw);
  return v;
}

}  // namespace beacon_forge
