/* C interface to the mixer library. All strings returned through `char**`
 * are owned by the caller and released with mixer_string_free. */
#ifndef MIXER_MIXER_H
#define MIXER_MIXER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MIXER_API __declspec(dllexport)
#else
#define MIXER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum mixer_status {
  MIXER_OK = 0,
  MIXER_E_INTERNAL = 1,
  MIXER_E_SPEC_SYNTAX = 2,
  MIXER_E_UNSUPPORTED_PARAMETERS = 3,
  MIXER_E_NON_PRIME_CHARACTERISTIC = 4,
  MIXER_E_NO_IRREDUCIBLE_FOUND = 5,
  MIXER_E_CAP_EXCEEDED = 6,
  MIXER_E_MIXED_GROUPS = 7,
  MIXER_E_NO_SUITABLE_PRIME = 8,
  MIXER_E_EIGENSPLIT_FAILURE = 9,
  MIXER_E_LOOP_BUDGET_EXCEEDED = 10,
  MIXER_E_ARITY_MISMATCH = 11,
  MIXER_E_UNCOVERED_PROBE = 12,
  MIXER_E_INVALID_ARGUMENT = 13,
  MIXER_E_IO = 14,
  MIXER_E_BOUND_VIOLATION = 15,
  MIXER_E_GOLDEN_MISMATCH = 16,
  MIXER_E_NO_REPRESENTATION = 17
} mixer_status;

typedef struct mixer_group mixer_group;

MIXER_API const char* mixer_version(void);
MIXER_API const char* mixer_status_name(int status);
/* Message of the last failing call on this thread ("" if none). */
MIXER_API const char* mixer_last_error(void);
MIXER_API void mixer_string_free(char* s);
MIXER_API void mixer_set_threads(unsigned threads);

/* Runs one pipeline described by a JSON config (keys: command, group, seed,
 * ...). On success *report_json holds the report and *report_csv the survey
 * CSV (or an empty string). Either output pointer may be NULL. */
MIXER_API int mixer_run(const char* config_json, char** report_json, char** report_csv);
/* Golden file name the config would read or write. */
MIXER_API int mixer_golden_name(const char* config_json, char** name);

/* Builds the group, its classes and its character table. */
MIXER_API int mixer_group_create(const char* spec, uint64_t max_order, mixer_group** out);
MIXER_API void mixer_group_destroy(mixer_group* g);
MIXER_API uint64_t mixer_group_order(const mixer_group* g);
MIXER_API size_t mixer_group_class_count(const mixer_group* g);
MIXER_API int mixer_group_degrees(const mixer_group* g, uint64_t* out, size_t capacity);
MIXER_API int mixer_group_zeta(const mixer_group* g, double s, double* out);
/* ||p_{x,y}||_2^2 by the character formula. */
MIXER_API int mixer_group_l2_sq(const mixer_group* g, size_t x_class, size_t y_class, double* out);
MIXER_API int mixer_group_chartable_json(const mixer_group* g, char** out);

#ifdef __cplusplus
}
#endif

#endif
