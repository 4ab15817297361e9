#include <doctest.h>

#include <cmath>
#include <sstream>

#include "beacon_forge/adversary.hpp"
#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/error.hpp"
#include "beacon_forge/spacetime.hpp"
#include "helpers.hpp"

using namespace beacon_forge;
using test::beacon_at;
using test::validated;

TEST_CASE("honest beacon is uniform, reproducible and in range") {
  constexpr std::size_t N = 100000;
  HonestBeacon a(derive_key(17, 0, purpose::kTrg), Alphabet(2), N);
  HonestBeacon b(derive_key(17, 0, purpose::kTrg), Alphabet(2), N);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const Digit d = a.next_digit();
    CHECK(d == b.next_digit());
    ones += d;
  }
  const double sigma = std::sqrt(N * 0.25);
  CHECK(std::abs(static_cast<double>(ones) - N / 2.0) < 3 * sigma);
  CHECK_ERROR_CODE(a.next_digit(), ErrorCode::StreamExhausted);

  HonestBeacon ten(derive_key(17, 1, purpose::kTrg), Alphabet(10), 5000);
  for (int i = 0; i < 5000; ++i) CHECK(ten.next_digit() < 10);
}

TEST_CASE("honest streams with distinct seeds are uncorrelated") {
  constexpr std::size_t N = 100000;
  const KeyedStream x(derive_key(3, 0, purpose::kTrg)), y(derive_key(3, 1, purpose::kTrg));
  for (std::size_t lag : {0u, 1u, 7u}) {
    double sum = 0.0;
    for (std::size_t i = 0; i + lag < N; ++i) {
      sum += (x.digit(i, 2) ? 1.0 : -1.0) * (y.digit(i + lag, 2) ? 1.0 : -1.0);
    }
    CHECK(std::abs(sum) < 3 * std::sqrt(static_cast<double>(N - lag)));
  }
}

TEST_CASE("sabotaged beacon passes its capture prefix through") {
  const std::size_t L = 600;
  const Key k = derive_key(21, 4, purpose::kTrg);
  SabotageParams p;
  p.marker = 0x123456789aull;
  SabotagedBeacon s(HonestBeacon(k, Alphabet(16), L), p, Alphabet(16), L);
  const KeyedStream trg(k);
  std::vector<Digit> out;
  for (std::size_t i = 0; i < L; ++i) out.push_back(s.next_digit());
  for (std::size_t i = 0; i < 256; ++i) CHECK(out[i] == trg.digit(i, 16));
  std::size_t same = 0;
  for (std::size_t i = 256; i < L; ++i) same += out[i] == trg.digit(i, 16);
  CHECK(same < 60);  // about 1/16 of 344 if the PSRG is independent of the TRG
  CHECK_ERROR_CODE(s.next_digit(), ErrorCode::StreamExhausted);
  CHECK_ERROR_CODE(SabotagedBeacon(HonestBeacon(k, Alphabet(2), 4), SabotageParams{}, Alphabet(2), 4),
                   ErrorCode::InvalidStrategy);
}

TEST_CASE("accomplice regenerates pseudorandom digits from the prefix") {
  const std::size_t L = 3000;
  SabotageParams p;
  p.marker = 0xffffffffffull;  // forty ones: practically never emitted
  SabotagedBeacon s(HonestBeacon(derive_key(8, 0, purpose::kTrg), Alphabet(2), L), p, Alphabet(2), L);
  std::vector<Digit> out;
  for (std::size_t i = 0; i < L; ++i) out.push_back(s.next_digit());
  REQUIRE(s.marker_firings() == 0);
  const auto pred = accomplice_predictions(p, Alphabet(2), out);
  for (std::size_t i = 0; i < 256; ++i) CHECK_FALSE(pred[i]);
  std::size_t hits = 0;
  for (std::size_t i = 256; i < L; ++i) hits += pred[i] && *pred[i] == out[i];
  CHECK(hits == L - 256);
}

TEST_CASE("a forced marker hides exactly the reseed digits") {
  const std::size_t L = 1500;
  const Key k = derive_key(99, 2, purpose::kTrg);
  SabotageParams p;
  p.marker = 0xffffffffffull;
  SabotagedBeacon plain(HonestBeacon(k, Alphabet(2), L), p, Alphabet(2), L);
  std::vector<Digit> base;
  for (std::size_t i = 0; i < L; ++i) base.push_back(plain.next_digit());
  // Marker = the 40 bits closing digit 400 of the unmarked run.
  std::uint64_t window = 0;
  for (std::size_t i = 0; i <= 400; ++i) window = ((window << 1) | base[i]) & kMarkerMask;
  p.marker = window;

  SabotagedBeacon s(HonestBeacon(k, Alphabet(2), L), p, Alphabet(2), L);
  std::vector<Digit> out;
  std::vector<SabotageMode> modes;
  for (std::size_t i = 0; i < L; ++i) {
    out.push_back(s.next_digit());
    modes.push_back(s.last_mode());
  }
  REQUIRE(s.marker_firings() >= 1);
  const auto fire = static_cast<std::size_t>(
      std::find(modes.begin() + 256, modes.end(), SabotageMode::Reseeding) - modes.begin());
  REQUIRE(fire <= 401);
  for (std::size_t i = 0; i < fire; ++i) CHECK(out[i] == base[i]);
  for (std::size_t i = fire; i < fire + 200; ++i) {
    CHECK(modes[i] == SabotageMode::Reseeding);
    CHECK(out[i] == KeyedStream(k).digit(i, 2));
  }
  CHECK(modes[fire + 200] == SabotageMode::Pseudorandom);

  const auto pred = accomplice_predictions(p, Alphabet(2), out);
  std::size_t unpredicted = 0;
  for (std::size_t i = 256; i < L; ++i) {
    if (!pred[i]) {
      ++unpredicted;
    } else {
      CHECK(*pred[i] == out[i]);
    }
  }
  CHECK(unpredicted == 200 * s.marker_firings());
}

TEST_CASE("adaptive beacon arithmetic") {
  const Key fk = derive_key(0, 0, purpose::kFallback);
  {
    AdaptiveBeacon a(2, 3, Alphabet(2), {0}, fk);
    const std::vector<DigitRecord> heard = {{0, 0, 1, {0, 0}}, {1, 0, 0, {1, 0}}};
    CHECK(a.next_digit(heard) == 1);
    CHECK(a.last_forced());
  }
  {
    AdaptiveBeacon a(0, 3, Alphabet(10), {5}, fk);
    const std::vector<DigitRecord> heard = {{1, 0, 7, {0, 0}}, {2, 0, 8, {1, 0}}};
    CHECK(a.next_digit(heard) == 0);
  }
  {
    AdaptiveBeacon a(0, 3, Alphabet(10), {5, 5}, fk);
    const std::vector<DigitRecord> partial = {{1, 0, 7, {0, 0}}};
    CHECK(a.next_digit(partial) == KeyedStream(fk).digit(0, 10));
    CHECK_FALSE(a.last_forced());
    // records for another index do not count
    const std::vector<DigitRecord> stale = {{1, 0, 7, {0, 0}}, {2, 0, 8, {0, 0}}};
    CHECK_FALSE((a.next_digit(stale), a.last_forced()));
    CHECK_ERROR_CODE(a.next_digit(stale), ErrorCode::StreamExhausted);
  }
}

TEST_CASE("emission schedule") {
  SUBCASE("two honest beacons") {
    const auto s = validated(3, {beacon_at(0, 0.3, 1.0), beacon_at(50, 0, 2.5)}, 20, CombinerKind::Xor, 4);
    const auto ledger = run_emission_schedule(s);
    REQUIRE(ledger.size() == 40);
    std::vector<double> last(2, -1e9);
    std::vector<std::size_t> next(2, 0);
    for (std::size_t k = 0; k < ledger.size(); ++k) {
      const DigitRecord& r = ledger[k];
      CHECK(r.stream_index == next[r.beacon]++);
      CHECK(r.event.time > last[r.beacon]);
      last[r.beacon] = r.event.time;
      if (k > 0) CHECK(ledger[k - 1].event.time <= r.event.time);
      CHECK(r.digit == KeyedStream(trg_key(s, r.beacon)).digit(r.stream_index, 3));
    }
    CHECK(run_emission_schedule(s) == ledger);
  }
  SUBCASE("adaptive beacon with everyone in its past cone forces the target") {
    auto adaptive = beacon_at(2, 5, 10, Honesty::AdaptiveColluder);
    adaptive.adaptive.target = {3, 1, 4, 1, 5, 9, 2, 6};
    const auto s = validated(10, {beacon_at(0, 0, 10), beacon_at(3, 0, 10), adaptive}, 8, CombinerKind::Xor, 2);
    const auto ledger = run_emission_schedule(s);
    CHECK(resultant_sequence(s, ledger, CombinerKind::Xor) == adaptive.adaptive.target);
  }
}

TEST_CASE("altering digits outside a beacon's past cone never changes its output") {
  // Mixed geometry: some adaptive beacons hear some others.
  auto a1 = beacon_at(0.5, 0.7, 2, Honesty::AdaptiveColluder);
  auto a2 = beacon_at(4, 1.5, 2, Honesty::AdaptiveColluder);
  const auto s = validated(5, {beacon_at(0, 0, 2), beacon_at(3, 0.2, 2), a1, a2, beacon_at(1, 1.1, 2)}, 6,
                           CombinerKind::Xor, 31);
  const auto base = run_emission_schedule(s);
  auto digit_of = [](const std::vector<DigitRecord>& ledger, BeaconId b, std::size_t i) {
    for (const DigitRecord& r : ledger) {
      if (r.beacon == b && r.stream_index == i) return r.digit;
    }
    return Digit{999};
  };
  std::size_t checked = 0;
  for (BeaconId a = 0; a < s.beacon_count(); ++a) {
    for (std::size_t j = 0; j < s.length(); ++j) {
      const Digit altered = (digit_of(base, a, j) + 1) % 5;
      const auto perturbed = run_emission_schedule(s, [&](BeaconId b, std::size_t i) -> std::optional<Digit> {
        if (b == a && i == j) return altered;
        return std::nullopt;
      });
      for (BeaconId b = 0; b < s.beacon_count(); ++b) {
        for (std::size_t i = 0; i < s.length(); ++i) {
          if (b == a && i == j) continue;
          if (in_forward_cone(s.emission(a, j), s.emission(b, i))) continue;
          CHECK(digit_of(perturbed, b, i) == digit_of(base, b, i));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("ledger CSV") {
  const auto s = validated(2, {beacon_at(0), beacon_at(0.5, 0.25)}, 2, CombinerKind::Xor, 1);
  std::ostringstream os;
  write_ledger_csv(os, run_emission_schedule(s));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "beacon_id,stream_index,digit,position,time");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  CHECK(os.str().find("1,0,") != std::string::npos);
  CHECK(os.str().find(",0.5,0.25\n") != std::string::npos);
}
