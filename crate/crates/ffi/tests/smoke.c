#include <stdio.h>
#include <string.h>
#include "dp5.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s failed\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    uint64_t n = 0;
    CHECK(dp5_count_torsor(1, 1, &n) == DP5_STATUS_OK);
    CHECK(n == 4);

    CHECK(dp5_count_naive(1000, 1, &n) == DP5_STATUS_NAIVE_BOUND_EXCEEDED);
    CHECK(dp5_last_error() != NULL && strlen(dp5_last_error()) > 0);

    Dp5CountReport *r = NULL;
    CHECK(dp5_count_report_new(100, true, true, 28.0, 1, &r) == DP5_STATUS_OK);
    uint64_t a = 0, b = 0, split[3];
    bool ok = false;
    CHECK(dp5_count_report_naive(r, &a) == DP5_STATUS_OK);
    CHECK(dp5_count_report_torsor(r, &b) == DP5_STATUS_OK);
    CHECK(a == b && a == 2222);
    CHECK(dp5_count_report_split(r, split) == DP5_STATUS_OK);
    CHECK(split[0] + split[1] + split[2] == a);
    CHECK(dp5_count_report_consistent(r, &ok) == DP5_STATUS_OK && ok);
    dp5_count_report_free(r);

    int64_t singular[6] = {0, 0, 1, 0, 0, 0};
    CHECK(dp5_is_on_surface(singular, &ok) == DP5_STATUS_OK && ok);

    int64_t eta[6] = {1, 1, 1, 1, 1, 1}, alpha[2] = {1, -2}, x[6];
    CHECK(dp5_psi(eta, alpha, x) == DP5_STATUS_OK);
    CHECK(x[0] == 1 && x[1] == 1 && x[2] == -2 && x[3] == 1 && x[4] == -2 && x[5] == -2);

    int64_t num = 0, den = 0;
    CHECK(dp5_alpha(&num, &den) == DP5_STATUS_OK && num == 1 && den == 864);

    CHECK(dp5_psi(NULL, alpha, x) == DP5_STATUS_NULL_POINTER);
    puts("ok");
    return 0;
}
