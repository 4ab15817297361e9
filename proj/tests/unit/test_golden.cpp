// Bit-exact vectors frozen from tests/oracles/golden_vectors.py, which uses
// hashlib and the cryptography package instead of this library.

#include <doctest.h>

#include <cstdio>
#include <string>

#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/keyed_stream.hpp"

using namespace beacon_forge;

namespace {

std::string hex(const Key& k) {
  std::string out;
  char buf[3];
  for (auto b : k) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

HashSpec spec(unsigned d) {
  HashSpec h;
  h.output_bits = d;
  return h;
}

}  // namespace

TEST_CASE("hash combiner matches the reference vectors") {
  CHECK(combine_hash(std::vector<Digit>{0x12, 0x34}, 0, spec(8)) == 152);
  CHECK(combine_hash(std::vector<Digit>{3, 9, 15}, 7, spec(4)) == 10);
  CHECK(combine_hash(std::vector<Digit>{0xabc, 0x123}, 5, spec(12)) == 3021);
}

TEST_CASE("key derivation matches the reference") {
  CHECK(hex(derive_key(42, 0, purpose::kTrg)) == "8878e1086cf2e5029cb6902b695e4d62f8020b6daeac81908fff42163d63d41b");
  const Digit seed_digits[] = {1, 2, 3};
  CHECK(hex(psrg_key_from_digits(seed_digits)) ==
        "0b83c6625602cab03f692b2d371ccde4a8ce388c10cd230c652220ac5d018285");
}

TEST_CASE("keyed streams match the reference") {
  const KeyedStream trg(derive_key(42, 0, purpose::kTrg));
  const std::vector<Digit> binary = {1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1};
  const std::vector<Digit> decimal = {7, 0, 9, 4, 1, 8, 1, 0, 4, 3, 9, 5, 8, 6, 6, 5};
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(trg.digit(i, 2) == binary[i]);
    CHECK(trg.digit(i, 10) == decimal[i]);
  }
  const KeyedStream fallback(derive_key(0xFFFFFFFFFFFFFFFFull, 3, purpose::kFallback));
  const std::vector<Digit> septenary = {1, 4, 2, 0, 2, 6, 6, 6};
  for (std::size_t i = 0; i < septenary.size(); ++i) CHECK(fallback.digit(i, 7) == septenary[i]);
}

TEST_CASE("sabotaged beacon trace matches the reference") {
  SabotageParams p;
  p.capture_length = 8;
  p.reseed_length = 5;
  p.marker = 0xd4d9b4f58cull;
  SabotagedBeacon beacon(HonestBeacon(derive_key(3, 1, purpose::kTrg), Alphabet(4), 60), p, Alphabet(4), 60);
  const std::vector<Digit> digits = {1, 0, 3, 1, 0, 0, 2, 2, 0, 2, 3, 3, 1, 1, 0, 3, 1, 2, 1, 2,
                                     3, 1, 0, 3, 3, 1, 1, 2, 0, 3, 0, 0, 3, 2, 2, 0, 1, 2, 0, 0,
                                     3, 1, 0, 2, 2, 0, 0, 1, 2, 2, 1, 3, 3, 2, 2, 2, 1, 2, 3, 3};
  const std::string modes = "ccccccccppppppppppppppppppppppprrrrrpppppppppppppppppppppppp";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    CAPTURE(i);
    CHECK(beacon.next_digit() == digits[i]);
    CHECK(to_string(beacon.last_mode())[0] == modes[i]);
  }
  CHECK(beacon.marker_firings() == 1);
}
