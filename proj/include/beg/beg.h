#ifndef BEG_BEG_H
#define BEG_BEG_H

/*
 * C interface to the zero-temperature BEG sampling library.
 *
 * Every object is an opaque handle created by a *_create / *_run function and
 * released by the matching *_destroy. Functions that can fail return a
 * beg_status; on failure beg_last_error() returns a message for the calling
 * thread, valid until that thread's next library call. Strings returned
 * through char** are owned by the caller and released with beg_string_free.
 * Once its arguments are validated, a failing call leaves handle and string
 * outputs set to NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BEG_BUILDING_LIBRARY)
#    define BEG_API __declspec(dllexport)
#  else
#    define BEG_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define BEG_API __attribute__((visibility("default")))
#else
#  define BEG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum beg_status {
  BEG_OK = 0,
  BEG_ERR_INVALID_ARGUMENT = 1,
  BEG_ERR_CAP_EXCEEDED = 2,
  BEG_ERR_INVARIANT_VIOLATION = 3,
  BEG_ERR_IO = 4,
  BEG_ERR_SAMPLING_ABORTED = 5,
  BEG_ERR_INTERNAL = 6
} beg_status;

typedef enum beg_sampler_kind { BEG_SAMPLER_CFTP = 0, BEG_SAMPLER_FORWARD = 1 } beg_sampler_kind;

typedef enum beg_estimator_kind {
  BEG_ESTIMATOR_SPIN_AVERAGE = 0,
  BEG_ESTIMATOR_CONNECTIVITY = 1
} beg_estimator_kind;

typedef struct beg_lattice beg_lattice;
typedef struct beg_config beg_config;
typedef struct beg_census beg_census;
typedef struct beg_sweep beg_sweep;
typedef struct beg_tail beg_tail;

BEG_API const char* beg_version(void);
BEG_API const char* beg_stream_algorithm(void);
BEG_API const char* beg_last_error(void);
BEG_API const char* beg_status_name(beg_status status);
BEG_API void beg_string_free(char* s);

/* Lattice: odd side >= 1, dimension >= 1. */
BEG_API beg_status beg_lattice_create(int dimension, int side, beg_lattice** out);
BEG_API void beg_lattice_destroy(beg_lattice* lattice);
BEG_API int beg_lattice_dimension(const beg_lattice* lattice);
BEG_API int beg_lattice_side(const beg_lattice* lattice);
BEG_API size_t beg_lattice_site_count(const beg_lattice* lattice);
BEG_API size_t beg_lattice_origin(const beg_lattice* lattice);

/* Configurations: one character per site, row-major, from "-0+". */
BEG_API beg_status beg_config_parse(const beg_lattice* lattice, const char* text, beg_config** out);
BEG_API beg_status beg_config_serialize(const beg_config* config, char** out);
BEG_API void beg_config_destroy(beg_config* config);
BEG_API int beg_config_spin(const beg_config* config, size_t site);
BEG_API int beg_config_is_feasible(const beg_config* config);
BEG_API uint64_t beg_config_energy(const beg_config* config);

typedef struct beg_run_options {
  beg_sampler_kind sampler;
  beg_estimator_kind estimator;
  uint64_t samples;
  uint64_t seed;
  unsigned workers;      /* 0: available parallelism */
  uint64_t horizon;      /* forward sampler; 0: site_count^2 */
  uint64_t max_attempts; /* forward retries per sample; 0: default */
  int max_epochs;        /* CFTP doubling cap; 0: default */
} beg_run_options;

BEG_API void beg_run_options_init(beg_run_options* options);

/* Perfect sample number `index` of the run described by `options`.
 * `wasted` (optional) receives the number of rejected forward attempts. */
BEG_API beg_status beg_sample(const beg_lattice* lattice, const beg_run_options* options,
                              uint64_t index, beg_config** out, uint64_t* wasted);

typedef struct beg_estimate {
  int dimension;
  int side;
  beg_sampler_kind sampler;
  beg_estimator_kind estimator;
  uint64_t samples_accepted;
  uint64_t samples_wasted;
  double mean;
  double std_error;
  double waste_rate; /* negative when not defined (CFTP) */
  uint64_t seed;
  double wall_time_ms;
} beg_estimate;

BEG_API beg_status beg_estimate_magnetization(const beg_lattice* lattice,
                                              const beg_run_options* options, beg_estimate* out);

BEG_API beg_status beg_sweep_run(int dimension, const int* sides, size_t side_count,
                                 const beg_run_options* options, beg_sweep** out);
BEG_API void beg_sweep_destroy(beg_sweep* sweep);
BEG_API size_t beg_sweep_size(const beg_sweep* sweep);
BEG_API beg_status beg_sweep_get(const beg_sweep* sweep, size_t index, beg_estimate* out);
/* Returns 1 and fills the outputs when the log-linear fit is defined. */
BEG_API int beg_sweep_fit(const beg_sweep* sweep, double* slope, double* intercept, double* r_squared);
BEG_API beg_status beg_sweep_csv(const beg_sweep* sweep, int include_timing, char** out);

/* Exact enumeration. site_cap 0 selects the default cap. */
BEG_API beg_status beg_census_create(const beg_lattice* lattice, int store_configs, size_t site_cap,
                                     beg_census** out);
BEG_API void beg_census_destroy(beg_census* census);

typedef struct beg_census_summary {
  uint64_t count;
  int64_t sum_origin_spin;
  uint64_t count_origin_connected;
  int64_t magnetization_numerator;
  int64_t magnetization_denominator;
  double magnetization;
} beg_census_summary;

BEG_API beg_status beg_census_summary_get(const beg_census* census, beg_census_summary* out);

/* Recomputes both sides of the connectivity identity from stored
 * configurations, or compares the census accumulators when none are stored.
 * *holds is 1 when equal. */
BEG_API beg_status beg_census_check_lemma1(const beg_census* census, int64_t* spin_sum,
                                           uint64_t* connected_count, int* holds);
BEG_API beg_status beg_census_report(const beg_census* census, int include_lemma1, char** out);

typedef void (*beg_log_fn)(void* user, const char* line);

typedef struct beg_couple_report {
  uint64_t steps;
  uint64_t checkpoints;
  double coverage;
  int violated;
  uint64_t violation_step;
  size_t violation_site;
  char invariant[64];
  char detail[512];
} beg_couple_report;

/* checkpoint_every 0: every site_count steps. Returns
 * BEG_ERR_INVARIANT_VIOLATION (with the report filled) on a violation. */
BEG_API beg_status beg_couple_check(const beg_lattice* lattice, uint64_t steps, uint64_t seed,
                                    uint64_t checkpoint_every, beg_log_fn log, void* user,
                                    beg_couple_report* out);

BEG_API beg_status beg_perc_tail_run(const beg_lattice* lattice, uint64_t samples, uint64_t seed,
                                     unsigned workers, beg_tail** out);
BEG_API void beg_tail_destroy(beg_tail* tail);
BEG_API double beg_tail_probability(const beg_tail* tail, size_t n);
/* Least-squares fit of log P(size >= n) on n in [n_min, n_max]. */
BEG_API int beg_tail_fit(const beg_tail* tail, size_t n_min, size_t n_max, double* slope,
                         double* intercept, double* r_squared);
BEG_API beg_status beg_tail_csv(const beg_tail* tail, char** out);

#ifdef __cplusplus
}
#endif

#endif
