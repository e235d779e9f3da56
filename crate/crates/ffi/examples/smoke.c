#include <math.h>
#include <stdio.h>

#include "gls.h"

int main(void) {
    GlsPsi *psi = NULL;
    if (gls_psi_power(1.0, 0.5, &psi) != GLS_STATUS_OK) {
        fprintf(stderr, "%s\n", gls_last_error_message());
        return 1;
    }
    double t = 0.0;
    if (gls_tail_bound(psi, 1.0, 2.0, &t) != GLS_STATUS_OK) {
        return 1;
    }
    printf("%.4f\n", t);
    gls_psi_free(psi);
    return fabs(t - 0.479141708788) < 1e-8 ? 0 : 1;
}
