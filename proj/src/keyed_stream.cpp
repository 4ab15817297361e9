#include "beacon_forge/keyed_stream.hpp"

#include <sodium.h>

#include <stdexcept>
#include <vector>

namespace beacon_forge {
namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

void put_be64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_le64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

constexpr std::string_view kDomain = "beacon-forge.v1";

}  // namespace

Digest sha256(std::span<const std::uint8_t> bytes) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), bytes.data(), bytes.size());
  return out;
}

Key derive_key(std::uint64_t master_seed, std::uint64_t slot, std::string_view purpose) {
  std::vector<std::uint8_t> msg(kDomain.begin(), kDomain.end());
  put_be64(msg, master_seed);
  put_be64(msg, slot);
  msg.insert(msg.end(), purpose.begin(), purpose.end());
  return sha256(msg);
}

bool reduce_uniform(std::uint64_t word, std::uint64_t bound, std::uint64_t& out) noexcept {
  if ((bound & (bound - 1)) == 0) {
    out = word & (bound - 1);
    return true;
  }
  // Accept word < ℓ·floor(2^64/ℓ) = 2^64 - (2^64 mod ℓ).
  const std::uint64_t last_accepted = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  if (word > last_accepted) return false;
  out = word % bound;
  return true;
}

std::array<std::uint64_t, 8> KeyedStream::block(std::uint64_t nonce, std::uint64_t counter) const {
  ensure_sodium();
  std::uint8_t n[crypto_stream_chacha20_NONCEBYTES];
  put_le64(n, nonce);
  std::uint8_t zeros[64] = {};
  std::uint8_t ks[64];
  crypto_stream_chacha20_xor_ic(ks, zeros, sizeof zeros, n, counter, key_.data());
  std::array<std::uint64_t, 8> words{};
  for (std::size_t i = 0; i < 8; ++i) words[i] = get_le64(ks + 8 * i);
  return words;
}

std::uint64_t KeyedStream::digit(std::uint64_t index, std::uint64_t alphabet) const {
  for (std::uint64_t counter = 0;; ++counter) {
    for (std::uint64_t w : block(index, counter)) {
      std::uint64_t out = 0;
      if (reduce_uniform(w, alphabet, out)) return out;
    }
  }
}

std::uint64_t DeterministicRng::next_u64() {
  if (used_ == buffer_.size()) {
    buffer_ = stream_.block(0, counter_++);
    used_ = 0;
  }
  return buffer_[used_++];
}

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
  std::uint64_t out = 0;
  while (!reduce_uniform(next_u64(), bound, out)) {
  }
  return out;
}

}  // namespace beacon_forge
