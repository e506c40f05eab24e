#ifndef CISTAIR_H
#define CISTAIR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cistair_status {
    CISTAIR_OK = 0,
    CISTAIR_INVALID_INPUT = 2,
    CISTAIR_UNSUPPORTED = 3,
    CISTAIR_INVARIANT = 4,
    CISTAIR_BUDGET = 5,
    CISTAIR_DOMAIN = 6,
    CISTAIR_NOT_EXACT = 7,
    CISTAIR_IO = 8,
    CISTAIR_INTERNAL = 9
} cistair_status;

typedef struct cistair_config cistair_config;
typedef struct cistair_result cistair_result;

const char* cistair_version(void);

/* Message of the last failed call on this thread ("" if none). */
const char* cistair_last_error(void);

cistair_status cistair_config_new(cistair_config** out);
void cistair_config_free(cistair_config* cfg);
/* key = value, same keys as the config file. */
cistair_status cistair_config_set(cistair_config* cfg, const char* key, const char* value);
cistair_status cistair_config_load(cistair_config* cfg, const char* path);
/* Writes the current value of `key` (NUL-terminated, truncated to len). */
cistair_status cistair_config_get(const cistair_config* cfg, const char* key, char* buf, size_t len);

/* Commands. On CISTAIR_OK, CISTAIR_INVARIANT and CISTAIR_BUDGET a result with a JSON
   report is returned in *out; on other codes *out is NULL. */
cistair_status cistair_exponents_cmd(const cistair_config* cfg, cistair_result** out);
cistair_status cistair_staircase_cmd(const cistair_config* cfg, cistair_result** out);
cistair_status cistair_realize_cmd(const cistair_config* cfg, cistair_result** out);
cistair_status cistair_verify_cmd(const char* dir, cistair_result** out);

int cistair_result_status(const cistair_result* r);
const char* cistair_result_json(const cistair_result* r);
void cistair_result_free(cistair_result* r);

/* Direct numeric queries. Matrices are row-major. */
cistair_status cistair_exponents(const double sigma1[4], const double sigma2[4], double* K_star, double* p, double* q);
/* out = {lambda1, lambda2, l, L, p} at angle theta for the diagonal pair (K, S1, S2). */
cistair_status cistair_theta_functions(double K, double S1, double S2, double theta, double out[5]);

#ifdef __cplusplus
}
#endif

#endif
