#ifndef CASCADE_EFT_H
#define CASCADE_EFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CASCADE_API __declspec(dllexport)
#else
#define CASCADE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cascade_status {
  CASCADE_OK = 0,
  CASCADE_ERR_CONFIG = 1,    /* bad config, unknown key, invalid argument */
  CASCADE_ERR_REGIME = 2,    /* model used outside its regime, resonance, domain */
  CASCADE_ERR_NUMERICAL = 3, /* integrator abort, truncation overflow, basis too large */
  CASCADE_ERR_IO = 4,
  CASCADE_ERR_INTERNAL = 5
} cascade_status;

typedef struct cascade_config cascade_config;
typedef struct cascade_result cascade_result;

typedef void (*cascade_warning_fn)(const char* message, void* user);

CASCADE_API const char* cascade_version(void);

/* Message of the last failure on the calling thread; empty when none. */
CASCADE_API const char* cascade_last_error(void);

/* NULL restores the default (stderr) handler. */
CASCADE_API void cascade_set_warning_callback(cascade_warning_fn fn, void* user);

/* Thread count from CASCADE_EFT_THREADS, else hardware concurrency. */
CASCADE_API int cascade_default_threads(void);

CASCADE_API size_t cascade_preset_count(void);
CASCADE_API const char* cascade_preset_name(size_t index);
/* Returns NULL for unknown names. */
CASCADE_API const char* cascade_preset_text(const char* name);

/* seed may be NULL; otherwise it overrides the config seed. */
CASCADE_API cascade_status cascade_config_load(const char* json_text, const uint64_t* seed,
                                               cascade_config** out);
CASCADE_API cascade_status cascade_config_load_file(const char* path, const uint64_t* seed,
                                                    cascade_config** out);
CASCADE_API void cascade_config_free(cascade_config* config);
CASCADE_API const char* cascade_config_hash(const cascade_config* config);
/* Canonical JSON of the expanded config. */
CASCADE_API const char* cascade_config_json(const cascade_config* config);
/* output.dir and output.stem with defaults "." and the config name (or "result"). */
CASCADE_API const char* cascade_config_output_dir(const cascade_config* config);
CASCADE_API const char* cascade_config_output_stem(const cascade_config* config);

/* threads <= 0 uses cascade_default_threads(). */
CASCADE_API cascade_status cascade_run(const cascade_config* config, int threads, cascade_result** out);
CASCADE_API void cascade_result_free(cascade_result* result);
CASCADE_API size_t cascade_result_row_count(const cascade_result* result);
CASCADE_API double cascade_result_wall_time(const cascade_result* result);
CASCADE_API const char* cascade_result_csv(const cascade_result* result);
CASCADE_API const char* cascade_result_json(const cascade_result* result, int include_timing);
CASCADE_API cascade_status cascade_result_write(const cascade_result* result, const char* dir,
                                                const char* stem);

/* Dry run. On CASCADE_OK *report_json holds a JSON report (free with
   cascade_string_free) whose "ok" flag says whether problems were found. */
CASCADE_API cascade_status cascade_validate(const char* json_text, const uint64_t* seed,
                                            char** report_json);
CASCADE_API void cascade_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
