#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/error.hpp"
#include "helpers.hpp"

using namespace beacon_forge;
using test::beacon_at;
using test::validated;

namespace {
HashSpec width(unsigned d) {
  HashSpec h;
  h.output_bits = d;
  return h;
}
}  // namespace

TEST_CASE("xor combiner") {
  CHECK(combine_xor(std::vector<Digit>{0, 1, 1}, Alphabet(2)) == 0);
  CHECK(combine_xor(std::vector<Digit>{7, 8}, Alphabet(10)) == 5);
  CHECK(combine_xor(std::vector<Digit>{6}, Alphabet(10)) == 6);
  CHECK_ERROR_CODE(combine_xor(std::vector<Digit>{2}, Alphabet(2)), ErrorCode::DigitOutOfRange);
  // no overflow near 2^32
  const Digit big = kMaxAlphabet - 1;
  CHECK(combine_xor(std::vector<Digit>{big, big, big}, Alphabet(kMaxAlphabet)) == kMaxAlphabet - 3);
}

TEST_CASE("xor combiner is order free and ignores zeros") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const std::uint64_t l = 2 + rng() % 50;
    std::vector<Digit> d(1 + rng() % 6);
    for (Digit& x : d) x = rng() % l;
    const Digit r = combine_xor(d, Alphabet(l));
    auto shuffled = d;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(combine_xor(shuffled, Alphabet(l)) == r);
    auto padded = d;
    padded.push_back(0);
    CHECK(combine_xor(padded, Alphabet(l)) == r);
    const std::size_t cut = rng() % d.size();
    const std::vector<Digit> head(d.begin(), d.begin() + cut), tail(d.begin() + cut, d.end());
    const std::vector<Digit> grouped = {head.empty() ? 0 : combine_xor(head, Alphabet(l)),
                                        combine_xor(tail, Alphabet(l))};
    CHECK(combine_xor(grouped, Alphabet(l)) == r);
  }
}

TEST_CASE("one uniform independent digit makes the xor uniform") {
  for (std::uint64_t l = 2; l <= 16; ++l) {
    for (std::size_t n = 1; n <= 3; ++n) {
      // beacon 0 uniform; the others take arbitrary fixed or correlated values
      std::map<Digit, std::uint64_t> counts;
      std::vector<Digit> d(n);
      std::uint64_t total = 0;
      const std::uint64_t others = n == 1 ? 1 : l;
      for (std::uint64_t u = 0; u < l; ++u) {
        for (std::uint64_t v = 0; v < others; ++v) {
          d[0] = u;
          for (std::size_t b = 1; b < n; ++b) d[b] = (v * (b + 3)) % l;
          ++counts[combine_xor(d, Alphabet(l))];
          ++total;
        }
      }
      CHECK(counts.size() == l);
      for (const auto& [digit, c] : counts) CHECK(c * l == total);
    }
  }
}

TEST_CASE("time-sharing combiner") {
  const auto s = validated(4, {beacon_at(0), beacon_at(5), beacon_at(10)}, 6, CombinerKind::TimeSharing, 8);
  const auto ledger = run_emission_schedule(s);
  const DigitMatrix m(s, ledger);
  CHECK(combine_time_sharing(ledger, 4, 3) == m.at(1, 4));
  CHECK(combine_time_sharing(ledger, 0, 3) == m.at(0, 0));
  CHECK(combine_time_sharing(ledger, 5, 3) == m.at(2, 5));
  const std::vector<DigitRecord> partial(ledger.begin(), ledger.begin() + 2);
  CHECK_ERROR_CODE(combine_time_sharing(partial, 5, 3), ErrorCode::MissingRecord);

  const auto one = validated(4, {beacon_at(0)}, 6, CombinerKind::TimeSharing, 8);
  const auto single = run_emission_schedule(one);
  for (std::size_t i = 0; i < 6; ++i) CHECK(combine_time_sharing(single, i, 1) == single[i].digit);
}

TEST_CASE("time-sharing reads exactly one beacon per index") {
  const auto s = validated(8, {beacon_at(0), beacon_at(5), beacon_at(10)}, 9, CombinerKind::TimeSharing, 2);
  const auto base = resultant_sequence(s, run_emission_schedule(s), CombinerKind::TimeSharing);
  for (BeaconId a = 0; a < 3; ++a) {
    const auto perturbed = resultant_sequence(
        s, run_emission_schedule(s, [a](BeaconId b, std::size_t) -> std::optional<Digit> {
          if (b == a) return 7;
          return std::nullopt;
        }),
        CombinerKind::TimeSharing);
    for (std::size_t i = 0; i < 9; ++i) {
      if (i % 3 == a) {
        CHECK(perturbed[i] == 7);
      } else {
        CHECK(perturbed[i] == base[i]);
      }
    }
  }
}

TEST_CASE("hash combiner contract") {
  const std::vector<Digit> d = {0x12, 0x34};
  CHECK(combine_hash(d, 3, width(8)) == combine_hash(d, 3, width(8)));
  CHECK(hash_encoding(0x0102, d, 8) == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 1, 2, 0x12, 0x34});
  CHECK(hash_encoding(1, std::vector<Digit>{0xabc}, 12) == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0, 1, 0x0a, 0xbc});
  std::mt19937_64 rng(1);
  for (unsigned w : {1u, 3u, 8u, 13u, 32u}) {
    for (int k = 0; k < 200; ++k) {
      const std::vector<Digit> x = {rng() >> (64 - w), rng() >> (64 - w)};
      CHECK(combine_hash(x, rng(), width(w)) < (std::uint64_t{1} << w));
    }
  }
  CHECK_ERROR_CODE(combine_hash(d, 0, width(0)), ErrorCode::AlphabetNotPowerOfTwo);
  CHECK_ERROR_CODE(combine_hash(d, 0, width(33)), ErrorCode::AlphabetNotPowerOfTwo);
  CHECK_ERROR_CODE(combine_hash(std::vector<Digit>{256}, 0, width(8)), ErrorCode::DigitOutOfRange);
}

TEST_CASE("hash combiner avalanche") {
  std::mt19937_64 rng(77);
  constexpr int kTrials = 10000;
  std::vector<int> flips(8, 0);
  for (int t = 0; t < kTrials; ++t) {
    std::vector<Digit> x = {rng() % 256, rng() % 256};
    const std::uint64_t i = rng();
    const Digit before = combine_hash(x, i, width(8));
    x[rng() % 2] ^= Digit{1} << (rng() % 8);
    const Digit diff = before ^ combine_hash(x, i, width(8));
    for (int b = 0; b < 8; ++b) flips[b] += (diff >> b) & 1;
  }
  for (int b = 0; b < 8; ++b) CHECK(std::abs(flips[b] / double(kTrials) - 0.5) <= 0.02);
}

TEST_CASE("resultant CSV") {
  const auto s = validated(4, {beacon_at(0), beacon_at(9)}, 3, CombinerKind::Hash, 5);
  const auto ledger = run_emission_schedule(s);
  std::ostringstream os;
  write_resultant_csv(os, s, ledger);
  const auto x = resultant_sequence(s, ledger, CombinerKind::Xor);
  const auto t = resultant_sequence(s, ledger, CombinerKind::TimeSharing);
  const auto h = resultant_sequence(s, ledger, CombinerKind::Hash);
  std::ostringstream want;
  want << "stream_index,xor,time_sharing,hash\n";
  for (std::size_t i = 0; i < 3; ++i) want << i << ',' << x[i] << ',' << t[i] << ',' << h[i] << '\n';
  CHECK(os.str() == want.str());

  const auto plain = validated(3, {beacon_at(0)}, 2);
  std::ostringstream os2;
  write_resultant_csv(os2, plain, run_emission_schedule(plain));
  CHECK(os2.str().find(",\n") != std::string::npos);
}
