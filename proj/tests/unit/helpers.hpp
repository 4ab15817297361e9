#pragma once

#include <string>
#include <utility>
#include <vector>

#include "beacon_forge/core.hpp"

namespace test {

using namespace beacon_forge;

inline BeaconSpec beacon_at(double x, double phase = 0.0, double period = 1.0, Honesty h = Honesty::Honest) {
  BeaconSpec b;
  b.position = x;
  b.phase_offset = phase;
  b.period = period;
  b.honesty = h;
  return b;
}

inline Scenario scenario_of(std::uint64_t alphabet, std::vector<BeaconSpec> beacons, std::size_t length,
                            CombinerKind combiner = CombinerKind::Xor, std::uint64_t seed = 0) {
  Scenario s;
  s.alphabet = Alphabet(alphabet);
  s.beacons = std::move(beacons);
  s.length = length;
  s.combiner = combiner;
  s.master_seed = seed;
  return s;
}

inline ValidatedScenario validated(std::uint64_t alphabet, std::vector<BeaconSpec> beacons, std::size_t length,
                                   CombinerKind combiner = CombinerKind::Xor, std::uint64_t seed = 0) {
  return validate_scenario(scenario_of(alphabet, std::move(beacons), length, combiner, seed));
}

inline std::string data_path(const std::string& name) { return std::string(BF_TEST_DATA_DIR) + "/" + name; }

}  // namespace test

#define CHECK_ERROR_CODE(expr, expected)                        \
  do {                                                          \
    bool caught_ = false;                                       \
    try {                                                       \
      (void)(expr);                                             \
    } catch (const beacon_forge::Error& e_) {                   \
      caught_ = true;                                           \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());        \
    }                                                           \
    CHECK_MESSAGE(caught_, "expected an error from " #expr);    \
  } while (0)
