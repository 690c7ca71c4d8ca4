/* SPDX-License-Identifier: Apache-2.0
 *
 * dcpsim -- deterministic simulator for cross-rollup atomic commitment
 * through a quorum-timestamped decentralized common pool.
 *
 * The engine is exposed through opaque handles and integer status codes.
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads concurrently; a single handle must not be shared.
 */
#ifndef DCPSIM_H
#define DCPSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DCPSIM_API __declspec(dllexport)
#else
#define DCPSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define DCPSIM_OK 0
#define DCPSIM_E_ARG 1      /* bad argument: null handle, unknown name */
#define DCPSIM_E_PARSE 2    /* scenario text could not be parsed */
#define DCPSIM_E_VALIDATE 3 /* scenario violates a protocol invariant */
#define DCPSIM_E_IO 4       /* file could not be read or written */
#define DCPSIM_E_AUDIT 5    /* trace failed the offline invariant audit */
#define DCPSIM_E_INTERNAL 6

typedef struct dcpsim_scenario dcpsim_scenario;
typedef struct dcpsim_result dcpsim_result;

DCPSIM_API const char* dcpsim_version(void);
DCPSIM_API const char* dcpsim_status_name(int status);

/* Human-readable diagnostic for the most recent failure on this thread. */
DCPSIM_API const char* dcpsim_last_error(void);

/* Scenario lifecycle. Loading parses and fully validates; a scenario that
 * loads is safe to run. */
DCPSIM_API int dcpsim_scenario_load_text(const char* text, size_t len, dcpsim_scenario** out);
DCPSIM_API int dcpsim_scenario_load_file(const char* path, dcpsim_scenario** out);
DCPSIM_API int dcpsim_scenario_set_seed(dcpsim_scenario* scenario, uint64_t seed);
DCPSIM_API void dcpsim_scenario_free(dcpsim_scenario* scenario);

/* Deterministic execution: identical (scenario, seed) pairs produce
 * byte-identical traces. */
DCPSIM_API int dcpsim_run(const dcpsim_scenario* scenario, dcpsim_result** out);
DCPSIM_API void dcpsim_result_free(dcpsim_result* result);

/* Borrowed views into the result; valid until dcpsim_result_free. */
DCPSIM_API const char* dcpsim_result_trace(const dcpsim_result* result, size_t* len);
DCPSIM_API const char* dcpsim_result_metrics_json(const dcpsim_result* result, size_t* len);

DCPSIM_API int dcpsim_result_write_trace(const dcpsim_result* result, const char* path);
DCPSIM_API int dcpsim_result_write_metrics(const dcpsim_result* result, const char* path);

/* Offline invariant audit of a serialized trace. On DCPSIM_E_AUDIT, when
 * report_out is non-null it receives the violation listing; release it
 * with dcpsim_string_free. */
DCPSIM_API int dcpsim_audit_text(const char* text, size_t len, char** report_out);
DCPSIM_API int dcpsim_audit_file(const char* path, char** report_out);
DCPSIM_API void dcpsim_string_free(char* text);

/* Bundled scenario presets. */
DCPSIM_API size_t dcpsim_preset_count(void);
DCPSIM_API const char* dcpsim_preset_name(size_t index);
DCPSIM_API const char* dcpsim_preset_summary(size_t index);
DCPSIM_API int dcpsim_preset_text(const char* name, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* DCPSIM_H */
