#include "beacon_forge/beacon_forge.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/entropy.hpp"
#include "beacon_forge/error.hpp"
#include "beacon_forge/harness.hpp"
#include "beacon_forge/scenario_io.hpp"
#include "beacon_forge/spacetime.hpp"

namespace bf = beacon_forge;

struct bf_scenario {
  bf::ValidatedScenario scenario;
};

struct bf_ledger {
  bf::ValidatedScenario scenario;
  std::vector<bf::DigitRecord> records;
};

namespace {

thread_local std::string last_error;

static_assert(BF_ERR_ALPHABET_TOO_SMALL == 1 + static_cast<int>(bf::ErrorCode::AlphabetTooSmall));
static_assert(BF_ERR_CONFIG_PARSE == 1 + static_cast<int>(bf::ErrorCode::ConfigParse));
static_assert(BF_ERR_INVALID_ARGUMENT == 1 + static_cast<int>(bf::ErrorCode::InvalidArgument));

bf_status status_of(bf::ErrorCode code) { return static_cast<bf_status>(1 + static_cast<int>(code)); }

template <class Fn>
bf_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return BF_OK;
  } catch (const bf::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BF_ERR_INTERNAL;
  }
}

bf_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return BF_ERR_NULL_ARGUMENT;
}

bf::CombinerKind combiner_of(bf_combiner c) {
  switch (c) {
    case BF_COMBINER_XOR: return bf::CombinerKind::Xor;
    case BF_COMBINER_TIME_SHARING: return bf::CombinerKind::TimeSharing;
    case BF_COMBINER_HASH: return bf::CombinerKind::Hash;
  }
  bf::fail(bf::ErrorCode::InvalidArgument, "unknown combiner");
}

}  // namespace

extern "C" {

const char* bf_version(void) { return "0.1.0"; }

const char* bf_last_error(void) { return last_error.c_str(); }

const char* bf_status_name(bf_status status) {
  switch (status) {
    case BF_OK: return "ok";
    case BF_ERR_NULL_ARGUMENT: return "null_argument";
    case BF_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case BF_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(bf::ErrorCode::InvalidArgument)) {
    return bf::to_string(static_cast<bf::ErrorCode>(code));
  }
  return "unknown";
}

int bf_exit_code(bf_status status) {
  if (status == BF_OK) return 0;
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(bf::ErrorCode::InvalidArgument)) {
    return bf::exit_code(static_cast<bf::ErrorCode>(code));
  }
  return 1;
}

void bf_experiment_init(bf_experiment* config) {
  if (!config) return;
  *config = bf_experiment{};
  config->command = "run";
  config->trials = 10000;
  config->threads = 1;
}

bf_status bf_scenario_load(const char* path, bf_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new bf_scenario{bf::load_scenario(path)}; });
}

bf_status bf_scenario_parse(const char* json, bf_scenario** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new bf_scenario{bf::validate_scenario(bf::parse_scenario(json))}; });
}

void bf_scenario_free(bf_scenario* scenario) { delete scenario; }

bf_status bf_scenario_set_seed(bf_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] { scenario->scenario = scenario->scenario.with_seed(seed); });
}

bf_status bf_scenario_info_get(const bf_scenario* scenario, bf_scenario_info* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const bf::ValidatedScenario& s = scenario->scenario;
    out->alphabet = s.alphabet().size();
    out->beacon_count = s.beacon_count();
    out->length = s.length();
    out->combiner = static_cast<bf_combiner>(s.combiner());
    out->master_seed = s.master_seed();
    out->dishonest_count = s.dishonest().size();
  });
}

bf_status bf_scenario_to_json(const bf_scenario* scenario, char* buf, size_t cap, size_t* needed) {
  if (!scenario) return null_argument("scenario");
  std::string text;
  const bf_status st = guarded([&] { text = bf::scenario_to_json(scenario->scenario.raw()); });
  if (st != BF_OK) return st;
  if (needed) *needed = text.size() + 1;
  if (!buf || cap < text.size() + 1) {
    last_error = "buffer too small for scenario JSON";
    return BF_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return BF_OK;
}

bf_status bf_ledger_run(const bf_scenario* scenario, bf_ledger** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new bf_ledger{scenario->scenario, bf::run_emission_schedule(scenario->scenario)};
  });
}

void bf_ledger_free(bf_ledger* ledger) { delete ledger; }

size_t bf_ledger_size(const bf_ledger* ledger) { return ledger ? ledger->records.size() : 0; }

bf_status bf_ledger_get(const bf_ledger* ledger, size_t position, bf_digit_record* out) {
  if (!ledger) return null_argument("ledger");
  if (!out) return null_argument("out");
  if (position >= ledger->records.size()) {
    last_error = "ledger position out of range";
    return BF_ERR_INDEX_OUT_OF_RANGE;
  }
  const bf::DigitRecord& r = ledger->records[position];
  *out = bf_digit_record{r.beacon, r.stream_index, r.digit, r.event.position, r.event.time};
  return BF_OK;
}

bf_status bf_ledger_resultant(const bf_ledger* ledger, bf_combiner combiner, uint64_t* out, size_t length) {
  if (!ledger) return null_argument("ledger");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (length != ledger->scenario.length()) bf::fail(bf::ErrorCode::InvalidArgument, "length mismatch");
    const auto r = bf::resultant_sequence(ledger->scenario, ledger->records, combiner_of(combiner));
    std::copy(r.begin(), r.end(), out);
  });
}

bf_status bf_ledger_write_csv(const bf_ledger* ledger, const char* path) {
  if (!ledger) return null_argument("ledger");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) bf::fail(bf::ErrorCode::Io, std::string("cannot open ") + path);
    bf::write_ledger_csv(f, ledger->records);
    f.close();
    if (!f) bf::fail(bf::ErrorCode::Io, std::string("write to ") + path + " failed");
  });
}

bf_status bf_classify_interval(double x1, double t1, double x2, double t2, bf_interval* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto k = bf::classify_interval(bf::make_event(x1, t1), bf::make_event(x2, t2));
    *out = static_cast<bf_interval>(k);
  });
}

bf_status bf_table1(size_t n, size_t k, double out[4]) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const bf::Table1 t = bf::table1(n, k);
    out[0] = t.spacelike_xor;
    out[1] = t.spacelike_time_sharing;
    out[2] = t.timelike_xor;
    out[3] = t.timelike_time_sharing;
  });
}

bf_status bf_single_beacon_min_entropy(size_t n, size_t k, uint64_t alphabet, size_t length, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = bf::single_beacon_min_entropy(n, k, alphabet, length); });
}

bf_status bf_entropy_exact(const bf_scenario* scenario, bf_protocol protocol, size_t beacon, size_t k,
                           int random_subset, double* min_entropy_per_char, double* shannon_per_char) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    if (protocol < BF_PROTOCOL_XOR || protocol > BF_PROTOCOL_SINGLE_BEACON) {
      bf::fail(bf::ErrorCode::InvalidArgument, "unknown protocol");
    }
    const bf::ProtocolChoice p{static_cast<bf::Protocol>(protocol), beacon};
    const bf::SabotageModel m{k, random_subset ? bf::SubsetKnowledge::RandomUnknown : bf::SubsetKnowledge::Known};
    const bf::EntropyReport r = bf::exact_entropy_report(scenario->scenario, p, m);
    if (min_entropy_per_char) *min_entropy_per_char = r.min_entropy_per_char_bits;
    if (shannon_per_char) *shannon_per_char = r.shannon_per_char_bits;
  });
}

bf_status bf_run_experiment(const bf_experiment* config) {
  if (!config) return null_argument("config");
  return guarded([&] {
    if (!config->scenario_path || !config->output_dir || !config->command) {
      bf::fail(bf::ErrorCode::ConfigParse, "scenario path, output directory and command are required");
    }
    bf::ExperimentConfig cfg;
    cfg.scenario_path = config->scenario_path;
    cfg.command = bf::parse_command(config->command);
    cfg.output_dir = config->output_dir;
    if (config->has_seed) cfg.seed_override = config->seed;
    cfg.trials = config->trials;
    cfg.threads = config->threads;
    cfg.index = config->index;
    cfg.empirical = config->empirical != 0;
    if (config->has_grid) {
      cfg.grid = bf::Grid{config->x_min, config->x_max, config->x_steps,
                          config->t_min, config->t_max, config->t_steps};
    }
    bf::run_experiment(cfg);
  });
}

}  // extern "C"
