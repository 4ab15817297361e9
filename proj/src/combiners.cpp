#include "beacon_forge/combiners.hpp"

#include <ostream>

#include "beacon_forge/error.hpp"
#include "beacon_forge/keyed_stream.hpp"

namespace beacon_forge {

Digit combine_xor(std::span<const Digit> digits, const Alphabet& alphabet) {
  const std::uint64_t l = alphabet.size();
  std::uint64_t sum = 0;
  for (Digit d : digits) {
    if (d >= l) fail(ErrorCode::DigitOutOfRange, "digit " + std::to_string(d) + " outside alphabet");
    sum = (sum + d) % l;  // l <= 2^32, no overflow
  }
  return sum;
}

Digit combine_time_sharing(std::span<const DigitRecord> ledger, std::size_t i, std::size_t beacon_count) {
  if (beacon_count == 0) fail(ErrorCode::InvalidArgument, "beacon count must be >= 1");
  const BeaconId slot = i % beacon_count;
  for (const DigitRecord& r : ledger) {
    if (r.beacon == slot && r.stream_index == i) return r.digit;
  }
  fail(ErrorCode::MissingRecord, "no record for beacon " + std::to_string(slot) + " index " + std::to_string(i));
}

std::vector<std::uint8_t> hash_encoding(std::uint64_t i, std::span<const Digit> digits, unsigned output_bits) {
  const unsigned width = (output_bits + 7) / 8;
  std::vector<std::uint8_t> msg;
  msg.reserve(8 + width * digits.size());
  for (int shift = 56; shift >= 0; shift -= 8) msg.push_back(static_cast<std::uint8_t>(i >> shift));
  for (Digit d : digits) {
    for (unsigned k = width; k-- > 0;) msg.push_back(static_cast<std::uint8_t>(d >> (8 * k)));
  }
  return msg;
}

Digit combine_hash(std::span<const Digit> digits, std::uint64_t i, const HashSpec& spec) {
  const unsigned d = spec.output_bits;
  if (d == 0 || d > 32) fail(ErrorCode::AlphabetNotPowerOfTwo, "hash combiner needs a 2^d alphabet, 1 <= d <= 32");
  if (spec.algorithm != "sha256") fail(ErrorCode::UnsupportedHash, "unsupported hash '" + spec.algorithm + "'");
  for (Digit x : digits) {
    if (x >> d) fail(ErrorCode::DigitOutOfRange, "digit wider than hash width");
  }
  const Digest h = sha256(hash_encoding(i, digits, d));
  std::uint64_t top = 0;
  for (int k = 0; k < 8; ++k) top = (top << 8) | h[k];
  return top >> (64 - d);
}

DigitMatrix::DigitMatrix(const ValidatedScenario& s, std::span<const DigitRecord> ledger)
    : beacons_(s.beacon_count()), length_(s.length()), digits_(beacons_ * length_, 0) {
  std::vector<bool> seen(digits_.size(), false);
  for (const DigitRecord& r : ledger) {
    if (r.beacon >= beacons_ || r.stream_index >= length_) {
      fail(ErrorCode::IndexOutOfRange, "ledger record outside scenario bounds");
    }
    const std::size_t at = r.beacon * length_ + r.stream_index;
    digits_[at] = r.digit;
    seen[at] = true;
  }
  for (std::size_t at = 0; at < seen.size(); ++at) {
    if (!seen[at]) {
      fail(ErrorCode::MissingRecord,
           "no record for beacon " + std::to_string(at / length_) + " index " + std::to_string(at % length_));
    }
  }
}

std::vector<Digit> DigitMatrix::column(std::size_t i) const {
  std::vector<Digit> col(beacons_);
  for (std::size_t b = 0; b < beacons_; ++b) col[b] = at(b, i);
  return col;
}

Digit combine_at(const ValidatedScenario& s, CombinerKind kind, std::span<const Digit> column, std::size_t i) {
  switch (kind) {
    case CombinerKind::Xor:
      return combine_xor(column, s.alphabet());
    case CombinerKind::TimeSharing:
      return column[i % column.size()];
    case CombinerKind::Hash: {
      const auto d = s.alphabet().bit_width();
      if (!d) fail(ErrorCode::AlphabetNotPowerOfTwo, "hash combiner needs a power-of-two alphabet");
      HashSpec spec = s.raw().hash_spec.value_or(HashSpec{});
      spec.output_bits = *d;
      return combine_hash(column, i, spec);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown combiner");
}

std::vector<Digit> resultant_sequence(const ValidatedScenario& s, std::span<const DigitRecord> ledger,
                                      CombinerKind kind) {
  const DigitMatrix m(s, ledger);
  std::vector<Digit> out(s.length());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = combine_at(s, kind, m.column(i), i);
  return out;
}

void write_resultant_csv(std::ostream& out, const ValidatedScenario& s, std::span<const DigitRecord> ledger) {
  const DigitMatrix m(s, ledger);
  const bool with_hash = s.combiner() == CombinerKind::Hash;
  out << "stream_index,xor,time_sharing,hash\n";
  for (std::size_t i = 0; i < s.length(); ++i) {
    const auto col = m.column(i);
    out << i << ',' << combine_at(s, CombinerKind::Xor, col, i) << ','
        << combine_at(s, CombinerKind::TimeSharing, col, i) << ',';
    if (with_hash) out << combine_at(s, CombinerKind::Hash, col, i);
    out << '\n';
  }
}

}  // namespace beacon_forge
