/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "cistair/cistair.h"

static int failures = 0;
#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(void) {
    const double s1[4] = {0.5, 0, 0, 0.5}, s2[4] = {2, 0, 0, 2};
    double K, p, q;
    EXPECT(cistair_exponents(s1, s2, &K, &p, &q) == CISTAIR_OK);
    EXPECT(fabs(K - 2) < 1e-12 && fabs(p - 4) < 1e-12 && fabs(q - 4.0 / 3.0) < 1e-12);

    const double bad[4] = {-1, 0, 0, 1};
    EXPECT(cistair_exponents(bad, s2, &K, &p, &q) == CISTAIR_INVALID_INPUT);
    EXPECT(strlen(cistair_last_error()) > 0);

    double f[5];
    EXPECT(cistair_theta_functions(2, 1, 2, M_PI / 2, f) == CISTAIR_OK);
    EXPECT(fabs(f[0] - 1.0 / 6) < 1e-12 && fabs(f[1] - 1.0 / 8) < 1e-12 && fabs(f[4] - 7.0 / 6) < 1e-12);
    EXPECT(cistair_theta_functions(2, 0.5, 2, 0, f) == CISTAIR_UNSUPPORTED);

    cistair_config* cfg = NULL;
    EXPECT(cistair_config_new(&cfg) == CISTAIR_OK);
    EXPECT(cistair_config_set(cfg, "N", "3") == CISTAIR_OK);
    EXPECT(cistair_config_set(cfg, "nope", "3") == CISTAIR_INVALID_INPUT);
    char buf[64];
    EXPECT(cistair_config_get(cfg, "N", buf, sizeof buf) == CISTAIR_OK && strcmp(buf, "3") == 0);

    cistair_result* res = NULL;
    EXPECT(cistair_exponents_cmd(cfg, &res) == CISTAIR_OK);
    EXPECT(res != NULL && cistair_result_status(res) == 0);
    EXPECT(strstr(cistair_result_json(res), "\"K_star\"") != NULL);
    cistair_result_free(res);

    EXPECT(cistair_config_set(cfg, "S1", "0.5") == CISTAIR_OK);
    res = NULL;
    EXPECT(cistair_realize_cmd(cfg, &res) == CISTAIR_UNSUPPORTED);
    EXPECT(res == NULL);

    EXPECT(cistair_verify_cmd("/nonexistent/cistair", &res) == CISTAIR_IO);
    EXPECT(cistair_config_new(NULL) == CISTAIR_INVALID_INPUT);
    cistair_config_free(cfg);

    if (failures) fprintf(stderr, "%d failures\n", failures);
    else printf("c api: all checks passed\n");
    return failures != 0;
}
