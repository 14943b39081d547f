/* C API for the sphtraffic simulation core.
 *
 * All functions return st_status (ST_OK on success). On failure,
 * st_last_error() returns a thread-local description of what went wrong.
 * Objects are opaque handles freed with their matching _free function.
 */
#ifndef SPHTRAFFIC_H
#define SPHTRAFFIC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
    ST_OK = 0,
    ST_ERR_VALIDATION = 2,
    ST_ERR_IO = 3,
    ST_ERR_RUNTIME = 4,
    ST_ERR_ARG = 5
} st_status;

typedef struct st_config st_config;
typedef struct st_result st_result;

const char* st_version(void);

/* Thread-local message for the most recent failure on this thread. */
const char* st_last_error(void);

/* Load a scenario: "builtin:<name>" or a JSON file path. */
st_status st_config_load(const char* scenario, st_config** out);
void st_config_free(st_config* cfg);

/* Keys: "seed" (u64). */
st_status st_config_set_u64(st_config* cfg, const char* key, uint64_t value);
/* Keys: "duration", "dt", "density_grid_period", "noncompliance_prob". */
st_status st_config_set_f64(st_config* cfg, const char* key, double value);
/* Keys: "density_grid_n". */
st_status st_config_set_i32(st_config* cfg, const char* key, int32_t value);
/* Keys: "policy" ("sph" | "blind"). */
st_status st_config_set_str(st_config* cfg, const char* key, const char* value);

/* Canonical JSON serialization; free the returned string with st_string_free. */
st_status st_config_to_json(const st_config* cfg, char** out_json);
void st_string_free(char* s);

/* Validate without running. */
st_status st_config_validate(const st_config* cfg);

/* Run one simulation, writing metrics.csv / congestion.csv / manifest.json
 * (and density grids when enabled) into out_dir. */
st_status st_run(const st_config* cfg, const char* out_dir, st_result** out);
void st_result_free(st_result* result);

double st_result_final_time(const st_result* result);
uint64_t st_result_spawned(const st_result* result);
uint64_t st_result_arrived(const st_result* result);
uint64_t st_result_active(const st_result* result);
/* Onset of congestion on a monitored segment. Returns ST_ERR_ARG for an
 * unmonitored segment. *has_onset = 0 means never congested (N/A). */
st_status st_result_congestion_onset(const st_result* result, const char* segment,
                                     int* has_onset, double* onset_time);

/* Cross product of seeds x policies ("sph"/"blind"), `jobs` runs in parallel,
 * one subdirectory per run plus summary.csv in out_dir. */
st_status st_sweep(const st_config* cfg, const uint64_t* seeds, size_t n_seeds,
                   const char* const* policies, size_t n_policies, int jobs,
                   const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SPHTRAFFIC_H */
