#include "beacon_forge/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <json.hpp>

#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/error.hpp"
#include "beacon_forge/format.hpp"
#include "beacon_forge/keyed_stream.hpp"
#include "beacon_forge/spacetime.hpp"
#include "parallel.hpp"

namespace beacon_forge {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::ExactEnumeration: return "exact";
    case Provenance::Analytic: return "analytic";
    case Provenance::Empirical: return "empirical";
  }
  return "?";
}

const char* to_string(Protocol p) noexcept {
  switch (p) {
    case Protocol::Xor: return "xor";
    case Protocol::TimeSharing: return "time_sharing";
    case Protocol::Hash: return "hash";
    case Protocol::SingleBeacon: return "single_beacon";
  }
  return "?";
}

ProtocolChoice protocol_of(CombinerKind combiner) noexcept {
  switch (combiner) {
    case CombinerKind::Xor: return {Protocol::Xor, 0};
    case CombinerKind::TimeSharing: return {Protocol::TimeSharing, 0};
    case CombinerKind::Hash: return {Protocol::Hash, 0};
  }
  return {};
}

namespace {

constexpr std::uint64_t kCodeLimit = std::uint64_t{1} << 63;

/// ℓ^L, or nothing when it reaches 2^63.
std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exponent) {
  std::uint64_t v = 1;
  for (std::size_t e = 0; e < exponent; ++e) {
    if (v > (kCodeLimit - 1) / base) return std::nullopt;
    v *= base;
  }
  return v;
}

double entropy_bits(const std::vector<std::pair<std::uint64_t, double>>& dist) {
  double h = 0.0;
  for (const auto& [code, p] : dist) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void sort_and_merge(std::vector<std::pair<std::uint64_t, double>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t in = 0; in < v.size(); ++in) {
    if (out > 0 && v[out - 1].first == v[in].first) {
      v[out - 1].second += v[in].second;
    } else {
      v[out++] = v[in];
    }
  }
  v.resize(out);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    // exact: c·(n-k+j) is divisible by j; saturate instead of overflowing
    const std::uint64_t num = n - k + j;
    if (c > UINT64_MAX / num) return UINT64_MAX;
    c = c * num / j;
  }
  return c;
}

/// All k-subsets of {0..n-1} as membership masks, in lexicographic order.
std::vector<std::vector<bool>> all_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<bool>> out;
  std::vector<std::size_t> pick(k);
  for (std::size_t j = 0; j < k; ++j) pick[j] = j;
  while (true) {
    std::vector<bool> mask(n, false);
    for (std::size_t p : pick) mask[p] = true;
    out.push_back(std::move(mask));
    std::size_t j = k;
    while (j > 0 && pick[j - 1] == n - k + j - 1) --j;
    if (j == 0) break;
    ++pick[j - 1];
    for (std::size_t m = j; m < k; ++m) pick[m] = pick[m - 1] + 1;
  }
  return out;
}

/// Everything about the dishonest side that does not depend on the honest
/// digits: predetermined digits and which beacon can force XOR at each index.
class ResultantModel {
 public:
  ResultantModel(const ValidatedScenario& s, ProtocolChoice protocol) : s_(s), protocol_(protocol) {
    const std::size_t n = s.beacon_count();
    if (protocol.kind == Protocol::SingleBeacon && protocol.beacon >= n) {
      fail(ErrorCode::IndexOutOfRange, "single beacon " + std::to_string(protocol.beacon));
    }
    if (protocol.kind == Protocol::Hash && !s.raw().hash_spec) {
      fail(ErrorCode::HashNeedsPowerOfTwo, "hash protocol needs a hash combiner scenario");
    }
    targets_.reserve(n);
    for (BeaconId b = 0; b < n; ++b) targets_.push_back(resolve_target(s, b));
    hears_.assign(n * s.length(), false);
    for (BeaconId b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < s.length(); ++i) hears_[b * s.length() + i] = hears_all_others(s, b, i);
    }
  }

  Digit target(BeaconId b, std::size_t i) const { return targets_[b][i]; }

  /// The dishonest beacon that fixes R_XOR(i), if any.
  std::optional<BeaconId> forcer(const std::vector<bool>& dishonest, std::size_t i) const {
    if (protocol_.kind != Protocol::Xor) return std::nullopt;
    for (BeaconId b = 0; b < dishonest.size(); ++b) {
      if (dishonest[b] && hears_[b * s_.length() + i]) return b;
    }
    return std::nullopt;
  }

  /// Fills the dishonest digits of `column` (honest ones already set) and
  /// returns R(i).
  Digit evaluate(const std::vector<bool>& dishonest, std::size_t i, std::vector<Digit>& column) const {
    const std::size_t n = column.size();
    const std::uint64_t l = s_.alphabet().size();
    for (BeaconId b = 0; b < n; ++b) {
      if (dishonest[b]) column[b] = target(b, i);
    }
    switch (protocol_.kind) {
      case Protocol::Xor: {
        if (auto f = forcer(dishonest, i)) {
          column[*f] = 0;
          const Digit others = combine_xor(column, s_.alphabet());
          column[*f] = (target(*f, i) + (l - others)) % l;
        }
        return combine_xor(column, s_.alphabet());
      }
      case Protocol::TimeSharing: return column[i % n];
      case Protocol::SingleBeacon: return column[protocol_.beacon];
      case Protocol::Hash: return combine_hash(column, i, s_.hash_spec());
    }
    return 0;
  }

  /// Exact distribution of R(i) for a fixed dishonest set, sorted by digit.
  std::vector<std::pair<std::uint64_t, double>> index_distribution(const std::vector<bool>& dishonest,
                                                                   std::size_t i) const {
    const std::size_t n = s_.beacon_count();
    const std::uint64_t l = s_.alphabet().size();
    auto point = [](Digit d) { return std::vector<std::pair<std::uint64_t, double>>{{d, 1.0}}; };
    auto uniform = [l] {
      if (l > kEnumerationCap) fail(ErrorCode::EnumerationTooLarge, "alphabet too large to enumerate");
      std::vector<std::pair<std::uint64_t, double>> u(l);
      for (std::uint64_t d = 0; d < l; ++d) u[d] = {d, 1.0 / static_cast<double>(l)};
      return u;
    };
    std::vector<BeaconId> honest;
    for (BeaconId b = 0; b < n; ++b) {
      if (!dishonest[b]) honest.push_back(b);
    }

    switch (protocol_.kind) {
      case Protocol::Xor:
        // A sum mod ℓ with at least one independent uniform term is uniform.
        if (auto f = forcer(dishonest, i)) return point(target(*f, i));
        if (!honest.empty()) return uniform();
        break;
      case Protocol::TimeSharing:
      case Protocol::SingleBeacon: {
        const BeaconId slot = protocol_.kind == Protocol::TimeSharing ? i % n : protocol_.beacon;
        return dishonest[slot] ? point(target(slot, i)) : uniform();
      }
      case Protocol::Hash:
        break;
    }

    // Enumerate the honest digits.
    const auto combos = checked_power(l, honest.size());
    if (!combos || *combos > kEnumerationCap) {
      fail(ErrorCode::EnumerationTooLarge, "too many honest digit combinations at index " + std::to_string(i));
    }
    std::vector<Digit> column(n, 0);
    std::map<Digit, std::uint64_t> tally;
    for (std::uint64_t c = 0; c < *combos; ++c) {
      std::uint64_t rest = c;
      for (BeaconId b : honest) {
        column[b] = rest % l;
        rest /= l;
      }
      ++tally[evaluate(dishonest, i, column)];
    }
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(tally.size());
    for (const auto& [d, count] : tally) {
      out.emplace_back(d, static_cast<double>(count) / static_cast<double>(*combos));
    }
    return out;
  }

 private:
  const ValidatedScenario& s_;
  ProtocolChoice protocol_;
  std::vector<std::vector<Digit>> targets_;
  std::vector<bool> hears_;
};

std::vector<std::vector<bool>> dishonest_sets(const ValidatedScenario& s, SabotageModel model) {
  const std::size_t n = s.beacon_count();
  if (model.k > n) fail(ErrorCode::InvalidCounts, "k exceeds the number of beacons");
  if (model.knowledge == SubsetKnowledge::Known) {
    const auto labelled = s.dishonest();
    if (labelled.size() != model.k) {
      fail(ErrorCode::InvalidCounts, "k = " + std::to_string(model.k) + " but the scenario labels " +
                                         std::to_string(labelled.size()) + " beacons dishonest");
    }
    std::vector<bool> mask(n, false);
    for (BeaconId b : labelled) mask[b] = true;
    return {mask};
  }
  if (binomial(n, model.k) > kEnumerationCap) fail(ErrorCode::EnumerationTooLarge, "too many dishonest subsets");
  return all_subsets(n, model.k);
}

}  // namespace

std::uint64_t encode_sequence(std::span<const Digit> digits, std::uint64_t alphabet) {
  if (!checked_power(alphabet, digits.size())) {
    fail(ErrorCode::EnumerationTooLarge, "sequence code does not fit 63 bits");
  }
  std::uint64_t code = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= alphabet) fail(ErrorCode::DigitOutOfRange, "digit outside alphabet");
    code = code * alphabet + digits[i];
  }
  return code;
}

std::vector<Digit> SequenceDistribution::decode(std::uint64_t code) const {
  std::vector<Digit> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = code % alphabet;
    code /= alphabet;
  }
  return out;
}

double SequenceDistribution::total() const {
  double t = 0.0;
  for (const auto& [code, p] : support) t += p;
  return t;
}

SequenceDistribution make_distribution(const std::vector<std::pair<std::vector<Digit>, double>>& entries,
                                       std::uint64_t alphabet, Provenance provenance) {
  SequenceDistribution dist;
  dist.alphabet = alphabet;
  dist.provenance = provenance;
  if (!entries.empty()) dist.length = entries.front().first.size();
  for (const auto& [seq, p] : entries) {
    if (seq.size() != dist.length) fail(ErrorCode::InvalidArgument, "sequences of different lengths");
    if (!(p >= 0.0)) fail(ErrorCode::InvalidArgument, "negative probability");
    dist.support.emplace_back(encode_sequence(seq, alphabet), p);
  }
  sort_and_merge(dist.support);
  return dist;
}

double min_entropy_exact(const SequenceDistribution& dist) {
  double best = 0.0;
  for (const auto& [code, p] : dist.support) best = std::max(best, p);
  if (!(best > 0.0)) fail(ErrorCode::EmptyDistribution, "distribution has no mass");
  return -std::log2(best);
}

double shannon_entropy(const SequenceDistribution& dist) {
  if (!(dist.total() > 0.0)) fail(ErrorCode::EmptyDistribution, "distribution has no mass");
  return entropy_bits(dist.support);
}

double conditional_shannon_entropy(const SequenceDistribution& dist) {
  if (dist.components.empty()) return shannon_entropy(dist);
  double h = 0.0;
  for (const MixtureComponent& c : dist.components) h += c.weight * c.shannon_bits;
  return h;
}

SequenceDistribution resultant_distribution(const ValidatedScenario& s, ProtocolChoice protocol,
                                            SabotageModel model) {
  const std::size_t L = s.length();
  const std::uint64_t l = s.alphabet().size();
  if (!checked_power(l, L)) fail(ErrorCode::EnumerationTooLarge, "ℓ^L does not fit a 63-bit sequence code");

  const auto subsets = dishonest_sets(s, model);
  const ResultantModel rm(s, protocol);
  const double weight = 1.0 / static_cast<double>(subsets.size());

  SequenceDistribution dist;
  dist.alphabet = l;
  dist.length = L;
  dist.provenance = Provenance::ExactEnumeration;

  std::uint64_t budget = kEnumerationCap;
  for (const auto& mask : subsets) {
    std::vector<std::vector<std::pair<std::uint64_t, double>>> per_index(L);
    MixtureComponent comp{weight, 0.0, 1.0};
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < L; ++i) {
      per_index[i] = rm.index_distribution(mask, i);
      double top = 0.0;
      for (const auto& [d, p] : per_index[i]) top = std::max(top, p);
      comp.shannon_bits += entropy_bits(per_index[i]);
      comp.max_probability *= top;
      if (per_index[i].size() > budget / size) {
        fail(ErrorCode::EnumerationTooLarge, "resultant support exceeds the enumeration cap");
      }
      size *= per_index[i].size();
    }
    budget -= size;

    // Independent across indices: the joint law is the product.
    std::vector<std::pair<std::uint64_t, double>> joint{{0, weight}};
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < L; ++i) {
      std::vector<std::pair<std::uint64_t, double>> next;
      next.reserve(joint.size() * per_index[i].size());
      for (const auto& [code, p] : joint) {
        for (const auto& [d, q] : per_index[i]) next.emplace_back(code + d * place, p * q);
      }
      joint = std::move(next);
      if (i + 1 < L) place *= l;
    }
    dist.support.insert(dist.support.end(), joint.begin(), joint.end());
    dist.components.push_back(comp);
  }
  sort_and_merge(dist.support);
  return dist;
}

double single_beacon_min_entropy(std::size_t n, std::size_t k, std::uint64_t alphabet, std::size_t length) {
  if (n == 0 || k > n || alphabet < 2 || length == 0) {
    fail(ErrorCode::InvalidCounts, "need n >= 1, 0 <= k <= n, ℓ >= 2, L >= 1");
  }
  const double log_l = std::log2(static_cast<double>(alphabet));
  if (k == 0) return log_l;
  const double f = static_cast<double>(k) / static_cast<double>(n);
  const double p = f + (1.0 - f) * std::exp2(-static_cast<double>(length) * log_l);
  return -std::log2(p) / static_cast<double>(length);
}

Table1 table1(std::size_t n, std::size_t k) {
  if (n == 0 || k > n) fail(ErrorCode::InvalidCounts, "need n >= 1 and 0 <= k <= n");
  if (k == 0) return {1.0, 1.0, 1.0, 1.0};
  if (k == n) return {0.0, 0.0, 0.0, 0.0};
  const double ts = static_cast<double>(n - k) / static_cast<double>(n);
  return {1.0, ts, 0.0, ts};
}

void write_table1_csv(std::ostream& out, const Table1& t) {
  out << "separation,xor,time_sharing\n";
  out << "spacelike," << format_real(t.spacelike_xor) << ',' << format_real(t.spacelike_time_sharing) << '\n';
  out << "timelike_latest_dishonest," << format_real(t.timelike_xor) << ','
      << format_real(t.timelike_time_sharing) << '\n';
}

ValidatedScenario reference_scenario(std::size_t n, std::size_t k, Separation separation, std::uint64_t alphabet,
                                     std::size_t length, CombinerKind combiner, std::uint64_t seed) {
  if (n == 0 || k > n) fail(ErrorCode::InvalidCounts, "need n >= 1 and 0 <= k <= n");
  Scenario s;
  s.alphabet = Alphabet(alphabet);
  s.length = length;
  s.combiner = combiner;
  s.master_seed = seed;
  for (BeaconId b = 0; b < n; ++b) {
    BeaconSpec spec;
    const bool dishonest = b + k >= n;
    spec.honesty = dishonest ? Honesty::AdaptiveColluder : Honesty::Honest;
    if (separation == Separation::Spacelike) {
      spec.position = 10.0 * static_cast<double>(b);
      spec.period = 1.0;
    } else {
      spec.position = static_cast<double>(b);
      spec.period = 100.0 * static_cast<double>(n);
      if (dishonest && b + 1 == n) spec.phase_offset = static_cast<double>(n);
    }
    s.beacons.push_back(spec);
  }
  return validate_scenario(std::move(s));
}

namespace {

EntropyReport report_header(const ValidatedScenario& s, ProtocolChoice protocol, SabotageModel model) {
  EntropyReport r;
  r.protocol = to_string(protocol.kind);
  if (protocol.kind == Protocol::SingleBeacon) r.protocol += ":" + std::to_string(protocol.beacon);
  r.separation = all_pairs_spacelike(s) ? "spacelike" : "timelike";
  r.n = s.beacon_count();
  r.k = model.k;
  r.l = s.alphabet().size();
  r.L = s.length();
  return r;
}

constexpr std::uint64_t kSampleBatch = 4096;

}  // namespace

EntropyReport exact_entropy_report(const ValidatedScenario& s, ProtocolChoice protocol, SabotageModel model) {
  const SequenceDistribution dist = resultant_distribution(s, protocol, model);
  EntropyReport r = report_header(s, protocol, model);
  const double L = static_cast<double>(s.length());
  r.min_entropy_per_char_bits = min_entropy_exact(dist) / L;
  r.shannon_per_char_bits = conditional_shannon_entropy(dist) / L;
  r.method = Provenance::ExactEnumeration;
  return r;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> EmpiricalCounts::merged() const {
  std::map<std::uint64_t, std::uint64_t> m;
  for (const auto& per_subset : counts) {
    for (const auto& [code, c] : per_subset) m[code] += c;
  }
  return {m.begin(), m.end()};
}

std::uint64_t EmpiricalCounts::max_count() const {
  std::uint64_t best = 0;
  for (const auto& [code, c] : merged()) best = std::max(best, c);
  return best;
}

EmpiricalCounts sample_resultants(const ValidatedScenario& s, ProtocolChoice protocol, SabotageModel model,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "need at least one sample");
  const std::size_t n = s.beacon_count();
  const std::size_t L = s.length();
  const std::uint64_t l = s.alphabet().size();
  if (!checked_power(l, L)) fail(ErrorCode::EnumerationTooLarge, "ℓ^L does not fit a 63-bit sequence code");

  const auto subsets = dishonest_sets(s, model);
  const ResultantModel rm(s, protocol);
  const std::uint64_t batches = (samples + kSampleBatch - 1) / kSampleBatch;

  using Tally = std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t>;
  std::vector<Tally> per_chunk(detail::effective_threads(threads, batches));
  detail::parallel_chunks(batches, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Tally& tally = per_chunk[chunk];
    std::vector<Digit> column(n);
    std::vector<Digit> seq(L);
    for (std::size_t batch = begin; batch < end; ++batch) {
      DeterministicRng rng(derive_key(seed, batch, purpose::kSampleBatch));
      const std::uint64_t first = batch * kSampleBatch;
      const std::uint64_t last = std::min(samples, first + kSampleBatch);
      for (std::uint64_t t = first; t < last; ++t) {
        const std::size_t which = subsets.size() == 1 ? 0 : rng.below(subsets.size());
        const auto& mask = subsets[which];
        for (std::size_t i = 0; i < L; ++i) {
          for (BeaconId b = 0; b < n; ++b) column[b] = mask[b] ? 0 : rng.below(l);
          seq[i] = rm.evaluate(mask, i, column);
        }
        ++tally[{which, encode_sequence(seq, l)}];
      }
    }
  });

  EmpiricalCounts out;
  out.samples = samples;
  out.alphabet = l;
  out.length = L;
  std::vector<std::map<std::uint64_t, std::uint64_t>> merged(subsets.size());
  for (const Tally& tally : per_chunk) {
    for (const auto& [key, c] : tally) merged[key.first][key.second] += c;
  }
  for (const auto& m : merged) out.counts.emplace_back(m.begin(), m.end());
  return out;
}

EntropyReport empirical_entropy_report(const ValidatedScenario& s, ProtocolChoice protocol, SabotageModel model,
                                       std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  const EmpiricalCounts counts = sample_resultants(s, protocol, model, samples, seed, threads);
  EntropyReport r = report_header(s, protocol, model);
  const double N = static_cast<double>(samples);
  const double L = static_cast<double>(s.length());
  r.min_entropy_per_char_bits = -std::log2(static_cast<double>(counts.max_count()) / N) / L;
  double h = 0.0;
  for (const auto& per_subset : counts.counts) {
    std::uint64_t ns = 0;
    for (const auto& [code, c] : per_subset) ns += c;
    if (ns == 0) continue;
    double hs = 0.0;
    for (const auto& [code, c] : per_subset) {
      const double p = static_cast<double>(c) / static_cast<double>(ns);
      hs -= p * std::log2(p);
    }
    h += static_cast<double>(ns) / N * hs;
  }
  r.shannon_per_char_bits = h / L;
  r.method = Provenance::Empirical;
  return r;
}

std::string entropy_report_json(const EntropyReport& r) {
  nlohmann::ordered_json j;
  j["protocol"] = r.protocol;
  j["separation"] = r.separation;
  j["n"] = r.n;
  j["k"] = r.k;
  j["l"] = r.l;
  j["L"] = r.L;
  j["min_entropy_per_char_bits"] = r.min_entropy_per_char_bits;
  j["shannon_per_char_bits"] = r.shannon_per_char_bits;
  j["method"] = to_string(r.method);
  return j.dump(2) + "\n";
}

}  // namespace beacon_forge
