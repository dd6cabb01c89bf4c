#ifndef SPECMULT_H
#define SPECMULT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPECMULT_BUILDING_LIBRARY)
#define SPECMULT_API __attribute__((visibility("default")))
#else
#define SPECMULT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum specmult_status {
    SPECMULT_OK = 0,
    SPECMULT_ERR_PARAMETER = 1,
    SPECMULT_ERR_DOMAIN = 2,
    SPECMULT_ERR_SHAPE = 3,
    SPECMULT_ERR_UNSUPPORTED = 4,
    SPECMULT_ERR_IO = 5,
    SPECMULT_ERR_DIVERGENCE = 6,
    SPECMULT_ERR_NULL_ARGUMENT = 7,
    SPECMULT_ERR_INTERNAL = 8
} specmult_status;

typedef struct specmult_config specmult_config;
typedef struct specmult_result specmult_result;

/* Message of the last failing call on this thread; never NULL. */
SPECMULT_API const char* specmult_last_error(void);
SPECMULT_API const char* specmult_status_name(specmult_status s);
SPECMULT_API const char* specmult_version(void);

SPECMULT_API size_t specmult_experiment_count(void);
/* NULL when i is out of range. */
SPECMULT_API const char* specmult_experiment_name(size_t i);

SPECMULT_API specmult_status specmult_config_load(const char* path, specmult_config** out);
SPECMULT_API specmult_status specmult_config_parse(const char* json_text, specmult_config** out);
SPECMULT_API const char* specmult_config_experiment(const specmult_config* cfg);
SPECMULT_API uint64_t specmult_config_seed(const specmult_config* cfg);
SPECMULT_API void specmult_config_free(specmult_config* cfg);

/* Writes the output files.  A divergence flag still yields SPECMULT_OK;
   query it with specmult_result_divergent. */
SPECMULT_API specmult_status specmult_run(const specmult_config* cfg, specmult_result** out);
SPECMULT_API specmult_status specmult_selftest(specmult_result** out);

SPECMULT_API size_t specmult_result_file_count(const specmult_result* r);
SPECMULT_API const char* specmult_result_file(const specmult_result* r, size_t i);
SPECMULT_API int specmult_result_divergent(const specmult_result* r);
/* selftest: 1 when every check passed. */
SPECMULT_API int specmult_result_passed(const specmult_result* r);
SPECMULT_API const char* specmult_result_summary(const specmult_result* r);
SPECMULT_API void specmult_result_free(specmult_result* r);

/* l2 norm of the r-th discrete Riesz transform on Z_K^d. */
SPECMULT_API specmult_status specmult_discrete_riesz_l2_norm(size_t K, size_t d, size_t r, double* out);

#ifdef __cplusplus
}
#endif

#endif
