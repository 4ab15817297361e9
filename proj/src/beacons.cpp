#include "beacon_forge/beacons.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string_view>

#include "beacon_forge/combiners.hpp"
#include "beacon_forge/error.hpp"
#include "beacon_forge/format.hpp"
#include "beacon_forge/spacetime.hpp"

namespace beacon_forge {

Key psrg_key_from_digits(std::span<const Digit> digits) {
  constexpr std::string_view tag = "beacon-forge.v1.psrg";
  std::vector<std::uint8_t> msg(tag.begin(), tag.end());
  auto put = [&msg](std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) msg.push_back(static_cast<std::uint8_t>(v >> shift));
  };
  put(digits.size());
  for (Digit d : digits) put(d);
  return sha256(msg);
}

Key trg_key(const ValidatedScenario& s, BeaconId b) { return derive_key(s.master_seed(), b, purpose::kTrg); }

std::uint64_t resolve_marker(const ValidatedScenario& s, BeaconId b) {
  if (const auto& m = s.beacon(b).sabotage.marker) return *m;
  const Key k = derive_key(s.master_seed(), b, purpose::kMarker);
  std::uint64_t m = 0;
  for (int i = 0; i < 5; ++i) m = (m << 8) | k[i];
  return m;
}

SabotageParams resolved_sabotage(const ValidatedScenario& s, BeaconId b) {
  SabotageParams p = s.beacon(b).sabotage;
  p.marker = resolve_marker(s, b);
  return p;
}

std::vector<Digit> resolve_target(const ValidatedScenario& s, BeaconId b) {
  const auto& configured = s.beacon(b).adaptive.target;
  if (s.beacon(b).honesty == Honesty::AdaptiveColluder && !configured.empty()) return configured;
  KeyedStream stream(derive_key(s.master_seed(), b, purpose::kTarget));
  std::vector<Digit> z(s.length());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = stream.digit(i, s.alphabet().size());
  return z;
}

HonestBeacon::HonestBeacon(const Key& stream_key, Alphabet alphabet, std::size_t length)
    : stream_(stream_key), alphabet_(alphabet), length_(length) {}

Digit HonestBeacon::next_digit() {
  if (counter_ >= length_) fail(ErrorCode::StreamExhausted, "honest stream exhausted");
  return digit_at(counter_++);
}

bool BitHistory::push(Digit d, bool scan, std::uint64_t marker) noexcept {
  bool hit = false;
  for (unsigned k = symbol_bits_; k-- > 0;) {
    window_ = (window_ << 1) | ((d >> k) & 1u);
    ++bits_seen_;
    if (scan && bits_seen_ >= kMarkerBits && (window_ & kMarkerMask) == marker) hit = true;
  }
  return hit;
}

const char* to_string(SabotageMode m) noexcept {
  switch (m) {
    case SabotageMode::Capturing: return "capturing";
    case SabotageMode::Pseudorandom: return "pseudorandom";
    case SabotageMode::Reseeding: return "reseeding";
  }
  return "?";
}

SabotagedBeacon::SabotagedBeacon(HonestBeacon trg, SabotageParams params, Alphabet alphabet, std::size_t length)
    : trg_(std::move(trg)),
      params_(std::move(params)),
      alphabet_(alphabet),
      length_(length),
      history_(alphabet.symbol_bits()) {
  if (!params_.marker) fail(ErrorCode::InvalidStrategy, "sabotaged beacon needs a resolved marker");
  if (params_.capture_length == 0 || params_.reseed_length == 0) {
    fail(ErrorCode::InvalidStrategy, "capture and reseed lengths must be >= 1");
  }
}

Digit SabotagedBeacon::next_digit() {
  if (index_ >= length_) fail(ErrorCode::StreamExhausted, "sabotaged stream exhausted");
  // The TRG keeps running underneath; its digit is used only outside PSRG mode.
  const Digit true_random = trg_.next_digit();
  last_mode_ = mode_;
  Digit out = 0;
  switch (mode_) {
    case SabotageMode::Capturing:
    case SabotageMode::Reseeding: {
      out = true_random;
      absorbed_.push_back(out);
      history_.push(out, false, *params_.marker);
      const std::size_t needed = mode_ == SabotageMode::Capturing ? params_.capture_length : params_.reseed_length;
      if (mode_ == SabotageMode::Reseeding) --reseed_remaining_;
      if (absorbed_.size() == needed) {
        psrg_.emplace(psrg_key_from_digits(absorbed_));
        psrg_counter_ = 0;
        absorbed_.clear();
        mode_ = SabotageMode::Pseudorandom;
      }
      break;
    }
    case SabotageMode::Pseudorandom:
      out = psrg_->digit(psrg_counter_++, alphabet_.size());
      if (history_.push(out, true, *params_.marker)) {
        ++firings_;
        mode_ = SabotageMode::Reseeding;
        reseed_remaining_ = params_.reseed_length;
      }
      break;
  }
  ++index_;
  return out;
}

AdaptiveBeacon::AdaptiveBeacon(BeaconId self, std::size_t beacon_count, Alphabet alphabet,
                               std::vector<Digit> target, const Key& fallback_key)
    : self_(self),
      beacon_count_(beacon_count),
      alphabet_(alphabet),
      target_(std::move(target)),
      fallback_(fallback_key) {}

Digit AdaptiveBeacon::next_digit(std::span<const DigitRecord> overheard) {
  if (index_ >= target_.size()) fail(ErrorCode::StreamExhausted, "adaptive stream exhausted");
  const std::size_t i = index_++;
  std::vector<bool> heard(beacon_count_, false);
  std::vector<Digit> others;
  for (const DigitRecord& r : overheard) {
    if (r.stream_index != i || r.beacon == self_ || r.beacon >= beacon_count_ || heard[r.beacon]) continue;
    heard[r.beacon] = true;
    others.push_back(r.digit);
  }
  last_forced_ = others.size() + 1 == beacon_count_;
  if (!last_forced_) return fallback_.digit(i, alphabet_.size());
  const Digit sum = others.empty() ? 0 : combine_xor(others, alphabet_);
  const std::uint64_t l = alphabet_.size();
  return (target_[i] + (l - sum)) % l;
}

namespace {

struct Emission {
  double time;
  BeaconId beacon;
  std::size_t index;
};

}  // namespace

std::vector<DigitRecord> run_emission_schedule(const ValidatedScenario& s, const DigitOverride& override_digit) {
  const std::size_t n = s.beacon_count();
  const std::size_t L = s.length();

  std::vector<Emission> order;
  order.reserve(n * L);
  for (BeaconId b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < L; ++i) order.push_back({s.emission(b, i).time, b, i});
  }
  std::stable_sort(order.begin(), order.end(), [](const Emission& a, const Emission& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.beacon < b.beacon;
  });

  std::vector<HonestBeacon> honest;
  std::vector<std::optional<SabotagedBeacon>> sabotaged(n);
  std::vector<std::optional<AdaptiveBeacon>> adaptive(n);
  std::vector<std::size_t> honest_slot(n, 0);
  for (BeaconId b = 0; b < n; ++b) {
    HonestBeacon trg(trg_key(s, b), s.alphabet(), L);
    switch (s.beacon(b).honesty) {
      case Honesty::Honest:
        honest_slot[b] = honest.size();
        honest.push_back(std::move(trg));
        break;
      case Honesty::SabotagedPsrg:
        sabotaged[b].emplace(std::move(trg), resolved_sabotage(s, b), s.alphabet(), L);
        break;
      case Honesty::AdaptiveColluder:
        adaptive[b].emplace(b, n, s.alphabet(), resolve_target(s, b),
                            derive_key(s.master_seed(), b, purpose::kFallback));
        break;
    }
  }

  // emitted[b * L + i] -> position in the ledger
  constexpr std::size_t kNotYet = static_cast<std::size_t>(-1);
  std::vector<std::size_t> emitted(n * L, kNotYet);
  std::vector<DigitRecord> ledger;
  ledger.reserve(n * L);
  std::vector<DigitRecord> overheard;

  for (const Emission& e : order) {
    const SpacetimeEvent& here = s.emission(e.beacon, e.index);
    Digit d = 0;
    switch (s.beacon(e.beacon).honesty) {
      case Honesty::Honest:
        d = honest[honest_slot[e.beacon]].next_digit();
        break;
      case Honesty::SabotagedPsrg:
        d = sabotaged[e.beacon]->next_digit();
        break;
      case Honesty::AdaptiveColluder:
        overheard.clear();
        for (BeaconId other = 0; other < n; ++other) {
          const std::size_t at = emitted[other * L + e.index];
          if (other == e.beacon || at == kNotYet) continue;
          if (in_forward_cone(ledger[at].event, here)) overheard.push_back(ledger[at]);
        }
        d = adaptive[e.beacon]->next_digit(overheard);
        break;
    }
    if (override_digit) {
      if (auto replacement = override_digit(e.beacon, e.index)) d = *replacement;
    }
    emitted[e.beacon * L + e.index] = ledger.size();
    ledger.push_back(DigitRecord{e.beacon, e.index, d, here});
  }
  return ledger;
}

void write_ledger_csv(std::ostream& out, std::span<const DigitRecord> ledger) {
  out << "beacon_id,stream_index,digit,position,time\n";
  for (const DigitRecord& r : ledger) {
    out << r.beacon << ',' << r.stream_index << ',' << r.digit << ',' << format_real(r.event.position) << ','
        << format_real(r.event.time) << '\n';
  }
}

}  // namespace beacon_forge
