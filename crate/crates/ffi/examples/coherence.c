#include <stdio.h>
#include "qdephase.h"

int main(void) {
    QdNoiseSpec *spec = NULL;
    if (qd_noise_spec_new(0.5, 0.2514, 50.0, 0.0, &spec) != QD_STATUS_OK) {
        fprintf(stderr, "%s\n", qd_last_error());
        return 1;
    }
    for (int k = 0; k <= 4; k++) {
        double t = 25.0 * k, c = 0.0;
        qd_coherence_z(spec, t, &c);
        printf("t = %6.2f  C = %.6f\n", t, c);
    }
    double n = 0.0, onset = 0.0;
    qd_blp_measure(spec, 100.0, 2001, &n, &onset);
    printf("N = %.6f, onset %.4f ms\n", n, onset);
    qd_noise_spec_free(spec);

    QdNoiseSpec *bad = NULL;
    if (qd_noise_spec_new(0.5, -1.0, 50.0, 0.0, &bad) == QD_STATUS_DOMAIN)
        printf("rejected: %s\n", qd_last_error());
    return 0;
}
