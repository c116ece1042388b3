#include <math.h>
#include <stdio.h>

#include "esdkit.h"

int main(void) {
    const double pi = acos(-1.0);
    const double theta = 0.4 * pi;
    char msg[256];

    printf("esdkit %s\n", esd_version());
    for (int i = 0; i <= 4; i++) {
        double jt = 0.25 * pi * i;
        EsdPureState *psi = NULL;
        EsdSigma s;
        if (esd_jc_state(theta, jt, &psi) != ESD_STATUS_OK || esd_sigma(psi, &s) != ESD_STATUS_OK) {
            esd_last_error_message(msg, sizeof msg);
            fprintf(stderr, "error: %s\n", msg);
            return 1;
        }
        printf("Jt=%.4f Q_AA=%+.6f Q_PP=%+.6f C4=%.6f Sigma=%.12f\n", jt, s.q_aa, s.q_pp, s.c4, s.sigma);
        esd_pure_state_free(psi);
    }

    double td = 0.0;
    esd_death_time(theta, 1.0, &td);
    printf("t_d = %.10f / Gamma\n", td);

    if (esd_jc_state(0.5, 0.0, NULL) != ESD_STATUS_NULL_POINTER) {
        return 1;
    }
    return 0;
}
