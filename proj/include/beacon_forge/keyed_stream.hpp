#pragma once

// Deterministic randomness for the simulator.
//
// Every stream is a ChaCha20 keystream (original 64-bit nonce / 64-bit block
// counter variant) under a 256-bit key. Keys are derived from the scenario's
// master seed:
//
//   key = SHA-256("beacon-forge.v1" || BE64(master_seed) || BE64(slot) || purpose)
//
// where `slot` is a beacon index (or a trial / batch number) and `purpose` is
// an ASCII tag such as "trg", "fallback" or "target". Digit i of a keyed
// stream comes from the keystream with nonce = i: the block is read as eight
// little-endian 64-bit words and the first word below ℓ·floor(2^64/ℓ) is
// reduced mod ℓ; if all eight are rejected the block counter advances.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace beacon_forge {

using Key = std::array<std::uint8_t, 32>;
using Digest = std::array<std::uint8_t, 32>;

namespace purpose {
inline constexpr std::string_view kTrg = "trg";
inline constexpr std::string_view kFallback = "fallback";
inline constexpr std::string_view kTarget = "target";
inline constexpr std::string_view kMarker = "marker";
inline constexpr std::string_view kAttackTrial = "attack-trial";
inline constexpr std::string_view kSampleBatch = "sample-batch";
}  // namespace purpose

Digest sha256(std::span<const std::uint8_t> bytes);

Key derive_key(std::uint64_t master_seed, std::uint64_t slot, std::string_view purpose);

/// Uniform value in [0, bound) from a raw 64-bit word, or nothing if the word
/// falls in the rejection zone. bound must be >= 1.
bool reduce_uniform(std::uint64_t word, std::uint64_t bound, std::uint64_t& out) noexcept;

/// Random-access digit stream: digit(i) depends only on (key, i, alphabet).
class KeyedStream {
 public:
  explicit KeyedStream(const Key& key) : key_(key) {}

  std::array<std::uint64_t, 8> block(std::uint64_t nonce, std::uint64_t counter) const;
  std::uint64_t digit(std::uint64_t index, std::uint64_t alphabet) const;

  const Key& key() const noexcept { return key_; }

 private:
  Key key_;
};

/// Sequential generator over a single keystream (nonce 0). Used for Monte
/// Carlo trials, where bit-exact portability matters more than speed.
class DeterministicRng {
 public:
  explicit DeterministicRng(const Key& key) : stream_(key) {}

  std::uint64_t next_u64();
  /// Uniform in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound);

 private:
  KeyedStream stream_;
  std::array<std::uint64_t, 8> buffer_{};
  std::uint64_t counter_ = 0;
  std::size_t used_ = 8;
};

}  // namespace beacon_forge
