#ifndef BEACON_FORGE_H
#define BEACON_FORGE_H

/* C interface to the beacon-forge simulator. Handles are opaque; every call
 * that can fail returns a bf_status and leaves a message for bf_last_error(). */

#include <stddef.h>
#include <stdint.h>

#if defined(BEACON_FORGE_BUILDING)
#define BF_API __attribute__((visibility("default")))
#else
#define BF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_ALPHABET_TOO_SMALL,
  BF_ERR_ALPHABET_TOO_LARGE,
  BF_ERR_HASH_NEEDS_POWER_OF_TWO,
  BF_ERR_EMPTY_BEACON_SET,
  BF_ERR_NON_POSITIVE_PERIOD,
  BF_ERR_INVALID_LENGTH,
  BF_ERR_INVALID_EVENT,
  BF_ERR_INVALID_STRATEGY,
  BF_ERR_UNSUPPORTED_HASH,
  BF_ERR_CONFIG_PARSE,
  BF_ERR_IO,
  BF_ERR_INVALID_SPEED,
  BF_ERR_INDEX_OUT_OF_RANGE,
  BF_ERR_NO_DISHONEST_BEACONS,
  BF_ERR_STREAM_EXHAUSTED,
  BF_ERR_DIGIT_OUT_OF_RANGE,
  BF_ERR_MISSING_RECORD,
  BF_ERR_ALPHABET_NOT_POWER_OF_TWO,
  BF_ERR_WIDTH_TOO_LARGE,
  BF_ERR_MASK_WIDER_THAN_OUTPUT,
  BF_ERR_INVALID_BUDGET,
  BF_ERR_EMPTY_DISTRIBUTION,
  BF_ERR_ENUMERATION_TOO_LARGE,
  BF_ERR_INVALID_COUNTS,
  BF_ERR_INVALID_ARGUMENT,
  BF_ERR_NULL_ARGUMENT = 100,
  BF_ERR_BUFFER_TOO_SMALL = 101,
  BF_ERR_INTERNAL = 102
} bf_status;

typedef enum bf_combiner { BF_COMBINER_XOR = 0, BF_COMBINER_TIME_SHARING = 1, BF_COMBINER_HASH = 2 } bf_combiner;

typedef enum bf_protocol {
  BF_PROTOCOL_XOR = 0,
  BF_PROTOCOL_TIME_SHARING = 1,
  BF_PROTOCOL_HASH = 2,
  BF_PROTOCOL_SINGLE_BEACON = 3
} bf_protocol;

typedef enum bf_interval { BF_SPACELIKE = 0, BF_TIMELIKE = 1, BF_LIGHTLIKE = 2 } bf_interval;

typedef struct bf_scenario bf_scenario;
typedef struct bf_ledger bf_ledger;

typedef struct bf_scenario_info {
  uint64_t alphabet;
  size_t beacon_count;
  size_t length;
  bf_combiner combiner;
  uint64_t master_seed;
  size_t dishonest_count;
} bf_scenario_info;

typedef struct bf_digit_record {
  size_t beacon;
  size_t stream_index;
  uint64_t digit;
  double position;
  double time;
} bf_digit_record;

typedef struct bf_experiment {
  const char* scenario_path;
  /* run, table1, attack-hash, entropy or predictability-map */
  const char* command;
  const char* output_dir;
  int has_seed;
  uint64_t seed;
  uint64_t trials;
  /* 0 means hardware concurrency; outputs do not depend on it */
  unsigned threads;
  size_t index;
  int empirical;
  int has_grid;
  double x_min, x_max;
  size_t x_steps;
  double t_min, t_max;
  size_t t_steps;
} bf_experiment;

BF_API const char* bf_version(void);
/* Message of the most recent failure on this thread ("" if none). */
BF_API const char* bf_last_error(void);
BF_API const char* bf_status_name(bf_status status);
/* Process exit status for a result: 0, 2 parse, 3 scenario, 4 enumeration, 1 other. */
BF_API int bf_exit_code(bf_status status);

/* Fills an experiment description with defaults (trials 10000, one thread). */
BF_API void bf_experiment_init(bf_experiment* config);

BF_API bf_status bf_scenario_load(const char* path, bf_scenario** out);
BF_API bf_status bf_scenario_parse(const char* json, bf_scenario** out);
BF_API void bf_scenario_free(bf_scenario* scenario);
BF_API bf_status bf_scenario_set_seed(bf_scenario* scenario, uint64_t seed);
BF_API bf_status bf_scenario_info_get(const bf_scenario* scenario, bf_scenario_info* out);
/* Canonical JSON. *needed receives the size including the terminator; buf may
 * be NULL with cap 0 to query it. */
BF_API bf_status bf_scenario_to_json(const bf_scenario* scenario, char* buf, size_t cap, size_t* needed);

BF_API bf_status bf_ledger_run(const bf_scenario* scenario, bf_ledger** out);
BF_API void bf_ledger_free(bf_ledger* ledger);
BF_API size_t bf_ledger_size(const bf_ledger* ledger);
BF_API bf_status bf_ledger_get(const bf_ledger* ledger, size_t position, bf_digit_record* out);
/* R(0..L-1) under the combiner; out must hold `length` digits. */
BF_API bf_status bf_ledger_resultant(const bf_ledger* ledger, bf_combiner combiner, uint64_t* out, size_t length);
BF_API bf_status bf_ledger_write_csv(const bf_ledger* ledger, const char* path);

BF_API bf_status bf_classify_interval(double x1, double t1, double x2, double t2, bf_interval* out);
/* out = {spacelike xor, spacelike time-sharing, timelike xor, timelike time-sharing} */
BF_API bf_status bf_table1(size_t n, size_t k, double out[4]);
BF_API bf_status bf_single_beacon_min_entropy(size_t n, size_t k, uint64_t alphabet, size_t length, double* out);
/* Exact per-character entropies in bits. With random_subset = 0 the k
 * dishonest beacons are the scenario's labelled ones. */
BF_API bf_status bf_entropy_exact(const bf_scenario* scenario, bf_protocol protocol, size_t beacon, size_t k,
                                  int random_subset, double* min_entropy_per_char, double* shannon_per_char);

BF_API bf_status bf_run_experiment(const bf_experiment* config);

#ifdef __cplusplus
}
#endif

#endif
