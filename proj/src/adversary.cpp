#include "beacon_forge/adversary.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "beacon_forge/combiners.hpp"
#include "beacon_forge/error.hpp"
#include "beacon_forge/spacetime.hpp"
#include "parallel.hpp"

namespace beacon_forge {

PairHash::PairHash(const HashSpec& spec, std::uint64_t index) : d_(spec.output_bits), index_(index) {
  if (d_ == 0 || d_ > 32) fail(ErrorCode::AlphabetNotPowerOfTwo, "hash width must satisfy 1 <= d <= 32");
  if (spec.algorithm != "sha256") fail(ErrorCode::UnsupportedHash, "unsupported hash '" + spec.algorithm + "'");
  field_bytes_ = (d_ + 7) / 8;
}

Digit PairHash::operator()(Digit x, Digit y) const {
  std::array<std::uint8_t, 16> msg{};
  std::size_t n = 0;
  for (int shift = 56; shift >= 0; shift -= 8) msg[n++] = static_cast<std::uint8_t>(index_ >> shift);
  for (Digit v : {x, y}) {
    for (unsigned k = field_bytes_; k-- > 0;) msg[n++] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  const Digest h = sha256(std::span<const std::uint8_t>(msg.data(), n));
  std::uint64_t top = 0;
  for (int k = 0; k < 8; ++k) top = (top << 8) | h[k];
  return top >> (64 - d_);
}

unsigned hamming_distance(Digit a, Digit b) noexcept { return static_cast<unsigned>(std::popcount(a ^ b)); }

BiasResult find_bias_string(const HashSpec& spec, unsigned bit_position, unsigned forced_value, std::uint64_t index,
                            unsigned threads, unsigned width_cap) {
  const PairHash h(spec, index);
  const unsigned d = h.width();
  if (d > width_cap) {
    fail(ErrorCode::WidthTooLarge, "exhaustive bias search capped at d = " + std::to_string(width_cap));
  }
  if (bit_position >= d) fail(ErrorCode::InvalidArgument, "bit position outside the output width");
  if (forced_value > 1) fail(ErrorCode::InvalidArgument, "forced value must be a bit");

  const std::uint64_t domain = h.domain();
  const unsigned workers = detail::effective_threads(threads, domain);
  std::vector<BiasResult> best(workers, BiasResult{0, UINT64_MAX});
  detail::parallel_chunks(domain, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    BiasResult local{0, UINT64_MAX};
    for (std::uint64_t x = begin; x < end; ++x) {
      std::uint64_t residual = 0;
      for (std::uint64_t y = 0; y < domain; ++y) {
        if (output_bit(h(x, y), d, bit_position) != forced_value) ++residual;
      }
      if (residual < local.residual_count) local = BiasResult{x, residual};
    }
    best[chunk] = local;
  });
  // Chunks cover increasing x, so strict < keeps the smallest x on ties.
  BiasResult result = best.front();
  for (const BiasResult& r : best) {
    if (r.residual_count < result.residual_count) result = r;
  }
  return result;
}

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::uint64_t count,
                                                      DeterministicRng& rng) {
  if (count > population) fail(ErrorCode::InvalidArgument, "sample larger than population");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::unordered_map<std::uint64_t, std::uint64_t> displaced;
  auto value_at = [&](std::uint64_t k) {
    auto it = displaced.find(k);
    return it == displaced.end() ? k : it->second;
  };
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t j = k + rng.below(population - k);
    const std::uint64_t vj = value_at(j);
    displaced[j] = value_at(k);
    out.push_back(vj);
  }
  return out;
}

AdaptiveResult adaptive_target_attack(const HashSpec& spec, Digit y, Digit z0, AttackBudget budget,
                                      std::uint64_t index, DeterministicRng& rng) {
  if (budget.evaluations == 0) fail(ErrorCode::InvalidBudget, "budget must allow at least one evaluation");
  const PairHash h(spec, index);
  const std::uint64_t domain = h.domain();
  AdaptiveResult best{0, h.width() + 1, 0};
  auto consider = [&](Digit x) {
    const unsigned dist = hamming_distance(h(x, y), z0);
    ++best.evaluated;
    if (dist < best.achieved_distance || (dist == best.achieved_distance && x < best.x_ddagger)) {
      best.x_ddagger = x;
      best.achieved_distance = dist;
    }
  };
  if (budget.evaluations >= domain) {
    for (Digit x = 0; x < domain; ++x) consider(x);
  } else {
    for (Digit x : sample_without_replacement(domain, budget.evaluations, rng)) consider(x);
  }
  return best;
}

ForceResult budgeted_force_bits(const HashSpec& spec, Digit y, std::span<const unsigned> mask,
                                std::span<const unsigned> wanted, AttackBudget budget, std::uint64_t index,
                                DeterministicRng& rng) {
  const PairHash h(spec, index);
  const unsigned d = h.width();
  if (mask.size() > d) fail(ErrorCode::MaskWiderThanOutput, "mask has more positions than output bits");
  if (wanted.size() != mask.size()) fail(ErrorCode::InvalidArgument, "wanted bits must match the mask");
  if (budget.evaluations == 0) fail(ErrorCode::InvalidBudget, "budget must allow at least one evaluation");
  Digit mask_bits = 0;
  Digit wanted_bits = 0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k] >= d) fail(ErrorCode::InvalidArgument, "mask position outside the output width");
    const Digit bit = Digit{1} << (d - 1 - mask[k]);
    if (mask_bits & bit) fail(ErrorCode::InvalidArgument, "duplicate mask position");
    if (wanted[k] > 1) fail(ErrorCode::InvalidArgument, "wanted values must be bits");
    mask_bits |= bit;
    if (wanted[k]) wanted_bits |= bit;
  }

  ForceResult result;
  result.best_distance = static_cast<unsigned>(mask.size());
  const std::uint64_t draws = std::min(budget.evaluations, h.domain());
  for (Digit x : sample_without_replacement(h.domain(), draws, rng)) {
    ++result.evaluated;
    const unsigned dist = hamming_distance(h(x, y) & mask_bits, wanted_bits);
    result.best_distance = std::min(result.best_distance, dist);
    if (dist == 0) {
      result.x_star = x;
      break;
    }
  }
  return result;
}

namespace {

HashSpec width_spec(unsigned d) {
  HashSpec spec;
  spec.output_bits = d;
  return spec;
}

struct TrialOutcome {
  unsigned distance = 0;
  bool success = false;
  std::uint64_t evaluated = 0;
};

template <class TrialFn>
std::vector<TrialOutcome> run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads, TrialFn&& trial) {
  std::vector<TrialOutcome> out(trials);
  detail::parallel_chunks(trials, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      DeterministicRng rng(derive_key(seed, t, purpose::kAttackTrial));
      out[t] = trial(rng);
    }
  });
  return out;
}

void summarize(AttackReport& r, const std::vector<TrialOutcome>& outcomes) {
  std::uint64_t hits = 0;
  std::uint64_t distance_sum = 0;
  std::uint64_t evaluated = 0;
  for (const TrialOutcome& o : outcomes) {
    hits += o.success ? 1 : 0;
    distance_sum += o.distance;
    evaluated += o.evaluated;
  }
  r.trials = outcomes.size();
  const double t = outcomes.empty() ? 1.0 : static_cast<double>(outcomes.size());
  r.success_rate = static_cast<double>(hits) / t;
  r.mean_distance = static_cast<double>(distance_sum) / t;
  r.x_values_sampled = evaluated;
}

void check_width(unsigned d) {
  if (d == 0 || d > 32) fail(ErrorCode::InvalidArgument, "attack width must satisfy 1 <= d <= 32");
}

}  // namespace

AdaptiveTrials simulate_adaptive_target(unsigned d, std::uint64_t budget, std::uint64_t trials, std::uint64_t seed,
                                        unsigned threads) {
  check_width(d);
  if (trials == 0) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  const HashSpec spec = width_spec(d);
  const std::uint64_t domain = std::uint64_t{1} << d;
  const auto outcomes = run_trials(trials, seed, threads, [&](DeterministicRng& rng) {
    const std::uint64_t index = rng.next_u64();
    const Digit y = rng.below(domain);
    const Digit z0 = rng.below(domain);
    const AdaptiveResult r = adaptive_target_attack(spec, y, z0, AttackBudget{budget}, index, rng);
    return TrialOutcome{r.achieved_distance, r.achieved_distance == 0, r.evaluated};
  });
  AdaptiveTrials result;
  result.report.attack = to_string(AttackKind::AdaptiveTarget);
  result.report.d = d;
  result.report.budget = budget;
  summarize(result.report, outcomes);
  result.distance_histogram.assign(d + 1, 0);
  for (const TrialOutcome& o : outcomes) ++result.distance_histogram[o.distance];
  return result;
}

AttackReport simulate_force_bits(unsigned d, unsigned m, std::uint64_t budget, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads) {
  check_width(d);
  if (m > d) fail(ErrorCode::MaskWiderThanOutput, "mask has more positions than output bits");
  if (trials == 0) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  const HashSpec spec = width_spec(d);
  const std::uint64_t domain = std::uint64_t{1} << d;
  std::vector<unsigned> mask(m);
  for (unsigned k = 0; k < m; ++k) mask[k] = k;
  const auto outcomes = run_trials(trials, seed, threads, [&](DeterministicRng& rng) {
    const std::uint64_t index = rng.next_u64();
    const Digit y = rng.below(domain);
    std::vector<unsigned> wanted(m);
    for (unsigned& w : wanted) w = static_cast<unsigned>(rng.below(2));
    const ForceResult r = budgeted_force_bits(spec, y, mask, wanted, AttackBudget{budget}, index, rng);
    return TrialOutcome{r.best_distance, r.x_star.has_value(), r.evaluated};
  });
  AttackReport report;
  report.attack = to_string(AttackKind::ForceBits);
  report.d = d;
  report.budget = budget;
  summarize(report, outcomes);
  return report;
}

AttackReport bias_attack_report(unsigned d, unsigned bit_position, unsigned forced_value, std::uint64_t index,
                                unsigned threads) {
  check_width(d);
  const BiasResult r = find_bias_string(width_spec(d), bit_position, forced_value, index, threads);
  const double domain = static_cast<double>(std::uint64_t{1} << d);
  AttackReport report;
  report.attack = to_string(AttackKind::Bias);
  report.d = d;
  report.budget = (std::uint64_t{1} << d) * (std::uint64_t{1} << d);
  report.trials = 1;
  report.success_rate = 1.0 - static_cast<double>(r.residual_count) / domain;
  report.mean_distance = static_cast<double>(r.residual_count) / domain;
  report.x_values_sampled = std::uint64_t{1} << d;
  return report;
}

std::string attack_report_json(const AttackReport& r) {
  nlohmann::ordered_json j;
  j["attack"] = r.attack;
  j["d"] = r.d;
  j["budget"] = r.budget;
  j["trials"] = r.trials;
  j["success_rate"] = r.success_rate;
  j["mean_distance"] = r.mean_distance;
  j["x_values_sampled"] = r.x_values_sampled;
  return j.dump(2) + "\n";
}

Accomplice::Accomplice(SabotageParams params, Alphabet alphabet)
    : params_(std::move(params)), alphabet_(alphabet), bits_(alphabet.symbol_bits()) {
  if (!params_.marker) fail(ErrorCode::InvalidStrategy, "accomplice needs the saboteur's marker");
}

std::optional<Digit> Accomplice::predict_next() const {
  if (mode_ != SabotageMode::Pseudorandom) return std::nullopt;
  return psrg_->digit(next_psrg_, alphabet_.size());
}

void Accomplice::observe(Digit published) {
  if (mode_ == SabotageMode::Pseudorandom) {
    ++next_psrg_;
    if (bits_.push(published, true, *params_.marker)) mode_ = SabotageMode::Reseeding;
    return;
  }
  bits_.push(published, false, *params_.marker);
  seed_digits_.push_back(published);
  const std::size_t needed =
      mode_ == SabotageMode::Capturing ? params_.capture_length : params_.reseed_length;
  if (seed_digits_.size() == needed) {
    psrg_.emplace(psrg_key_from_digits(seed_digits_));
    seed_digits_.clear();
    next_psrg_ = 0;
    mode_ = SabotageMode::Pseudorandom;
  }
}

std::vector<std::optional<Digit>> accomplice_predictions(const SabotageParams& params, const Alphabet& alphabet,
                                                         std::span<const Digit> published) {
  Accomplice a(params, alphabet);
  std::vector<std::optional<Digit>> out;
  out.reserve(published.size());
  for (Digit d : published) {
    out.push_back(a.predict_next());
    a.observe(d);
  }
  return out;
}

PredictorModel accomplice_model(const ValidatedScenario& s, const SpacetimeEvent& vantage) {
  return PredictorModel{s.dishonest(), make_event(vantage.position, vantage.time)};
}

DigitPrediction DigitPrediction::point(Digit value, std::uint64_t alphabet) {
  DigitPrediction p;
  p.kind_ = Kind::PointMass;
  p.value_ = value;
  p.alphabet_ = alphabet;
  return p;
}

DigitPrediction DigitPrediction::uniform(std::uint64_t alphabet) {
  DigitPrediction p;
  p.kind_ = Kind::Uniform;
  p.alphabet_ = alphabet;
  return p;
}

DigitPrediction DigitPrediction::explicit_probabilities(std::vector<double> probs) {
  DigitPrediction p;
  p.kind_ = Kind::Explicit;
  p.alphabet_ = probs.size();
  p.p_ = std::move(probs);
  return p;
}

double DigitPrediction::probability(Digit d) const {
  if (d >= alphabet_) return 0.0;
  switch (kind_) {
    case Kind::PointMass: return d == value_ ? 1.0 : 0.0;
    case Kind::Uniform: return 1.0 / static_cast<double>(alphabet_);
    case Kind::Explicit: return p_[d];
  }
  return 0.0;
}

double DigitPrediction::max_probability() const {
  switch (kind_) {
    case Kind::PointMass: return 1.0;
    case Kind::Uniform: return 1.0 / static_cast<double>(alphabet_);
    case Kind::Explicit: return *std::max_element(p_.begin(), p_.end());
  }
  return 0.0;
}

double DigitPrediction::total() const {
  if (kind_ != Kind::Explicit) return 1.0;
  double s = 0.0;
  for (double v : p_) s += v;
  return s;
}

Digit DigitPrediction::most_likely() const {
  switch (kind_) {
    case Kind::PointMass: return value_;
    case Kind::Uniform: return 0;
    case Kind::Explicit: return static_cast<Digit>(std::max_element(p_.begin(), p_.end()) - p_.begin());
  }
  return 0;
}

namespace {

// Largest number of unknown-digit assignments enumerated per index.
constexpr std::uint64_t kPredictionEnumerationCap = std::uint64_t{1} << 16;

DigitPrediction classify(std::vector<double> p) {
  const std::uint64_t l = p.size();
  for (Digit d = 0; d < l; ++d) {
    if (p[d] == 1.0) return DigitPrediction::point(d, l);
  }
  const double u = 1.0 / static_cast<double>(l);
  bool flat = true;
  for (double v : p) flat = flat && std::abs(v - u) < 1e-12;
  return flat ? DigitPrediction::uniform(l) : DigitPrediction::explicit_probabilities(std::move(p));
}

}  // namespace

std::vector<DigitPrediction> predict_sequence(const PredictorModel& model, const ValidatedScenario& s,
                                              std::span<const DigitRecord> ledger) {
  const std::size_t n = s.beacon_count();
  const std::size_t L = s.length();
  const std::uint64_t l = s.alphabet().size();
  const DigitMatrix digits(s, ledger);

  std::vector<bool> in_set(n, false);
  for (BeaconId b : model.dishonest_set) {
    if (b >= n) fail(ErrorCode::InvalidArgument, "dishonest set names an unknown beacon");
    if (!s.is_dishonest(b)) fail(ErrorCode::InvalidArgument, "dishonest set names an honest beacon");
    in_set[b] = true;
  }

  // Sabotaged beacons: what the accomplice reconstructs from their published streams.
  std::vector<std::vector<std::optional<Digit>>> replay(n);
  std::vector<std::vector<Digit>> targets(n);
  for (BeaconId b = 0; b < n; ++b) {
    if (!in_set[b]) continue;
    if (s.beacon(b).honesty == Honesty::SabotagedPsrg) {
      std::vector<Digit> stream(L);
      for (std::size_t i = 0; i < L; ++i) stream[i] = digits.at(b, i);
      replay[b] = accomplice_predictions(resolved_sabotage(s, b), s.alphabet(), stream);
    } else {
      targets[b] = resolve_target(s, b);
    }
  }

  std::vector<DigitPrediction> out;
  out.reserve(L);
  std::vector<bool> known(n);
  for (std::size_t i = 0; i < L; ++i) {
    // A forced colluder's digit is z(i) minus the others, whatever they are.
    std::optional<BeaconId> forced;
    std::vector<BeaconId> unknown;
    for (BeaconId b = 0; b < n; ++b) {
      const Honesty role = in_set[b] ? s.beacon(b).honesty : Honesty::Honest;
      known[b] = in_forward_cone(s.emission(b, i), model.vantage);
      if (role == Honesty::SabotagedPsrg && replay[b][i]) known[b] = true;
      if (role == Honesty::AdaptiveColluder) {
        if (hears_all_others(s, b, i)) {
          forced = b;
        } else {
          known[b] = true;
        }
      }
      if (!known[b] && forced != b) unknown.push_back(b);
    }

    const auto column = digits.column(i);
    const Digit actual = combine_at(s, s.combiner(), column, i);
    if (unknown.empty()) {
      out.push_back(DigitPrediction::point(actual, l));
      continue;
    }

    std::uint64_t combos = 1;
    bool too_many = false;
    for (std::size_t k = 0; k < unknown.size() && !too_many; ++k) {
      too_many = combos > kPredictionEnumerationCap / l;
      combos *= l;
    }
    if (too_many) {
      // Analytic fallback: an independent uniform digit enters R(i).
      if (s.combiner() == CombinerKind::Xor && forced) {
        out.push_back(DigitPrediction::point(targets[*forced][i], l));
      } else if (s.combiner() == CombinerKind::TimeSharing && known[i % n]) {
        out.push_back(DigitPrediction::point(actual, l));
      } else {
        out.push_back(DigitPrediction::uniform(l));
      }
      continue;
    }

    std::vector<double> p(l, 0.0);
    std::uint64_t consistent = 0;
    std::vector<Digit> trial = column;
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t rest = c;
      for (BeaconId b : unknown) {
        trial[b] = rest % l;
        rest /= l;
      }
      if (forced) {
        trial[*forced] = 0;
        const Digit others = combine_xor(trial, s.alphabet());
        trial[*forced] = (targets[*forced][i] + (l - others)) % l;
        // An overheard forced digit pins down the sum of the unknown ones.
        if (known[*forced] && trial[*forced] != column[*forced]) continue;
      }
      ++consistent;
      p[combine_at(s, s.combiner(), trial, i)] += 1.0;
    }
    for (double& v : p) v /= static_cast<double>(consistent);
    out.push_back(classify(std::move(p)));
  }
  return out;
}

}  // namespace beacon_forge
