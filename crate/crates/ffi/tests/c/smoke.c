#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "valnet.h"

static const char *KAPPA_CHAIN =
    "kind kappa\n"
    "model vn\n"
    "var W 2\nvar X 2\nvar Y 2\nvar Z 2\n"
    "cond alpha head W\n"
    "cond beta head X tail W\n"
    "cond gamma head Y Z tail X\n"
    "table alpha 0 2\n"
    "table beta 0 1 3 0\n"
    "table gamma 0 1 2 inf 1 0 0 4\n";

int main(void) {
    VnModel *m = NULL;
    if (vn_model_parse(KAPPA_CHAIN, &m) != VN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", vn_last_error());
        return 1;
    }
    VnVerdict v;
    if (vn_model_query(m, "W", "Y,Z", "X", VN_CRITERION_VN_SEPARATION, &v) != VN_STATUS_OK || v != VN_VERDICT_INDEPENDENT)
        return 2;
    double buf[4];
    size_t n = 0;
    if (vn_model_marginal(m, "W,Y", buf, 4, &n) != VN_STATUS_OK || n != 4)
        return 3;
    printf("%g %g %g %g\n", buf[0], buf[1], buf[2], buf[3]);
    char *dot = NULL;
    if (vn_model_dot(m, &dot) != VN_STATUS_OK)
        return 4;
    vn_string_free(dot);
    vn_model_free(m);
    if (vn_model_parse("model nonsense\n", &m) != VN_STATUS_PARSE_ERROR || m != NULL || vn_last_error() == NULL)
        return 5;
    puts("ok");
    return 0;
}
