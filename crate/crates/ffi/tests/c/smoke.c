#include <stdio.h>
#include "cran_arq.h"

int main(void) {
    CranArqConfig *cfg = NULL;
    CranArqStatus st = cran_arq_config_from_json(
        "{\"protocol\": \"sw\", \"architecture\": \"cran\", \"q\": 4}", &cfg);
    if (st != CRAN_ARQ_STATUS_OK) {
        fprintf(stderr, "config: %s\n", cran_arq_last_error_message());
        return 1;
    }
    CranArqMetrics m;
    st = cran_arq_solve(cfg, &m);
    if (st != CRAN_ARQ_STATUS_OK) {
        fprintf(stderr, "solve: %s\n", cran_arq_last_error_message());
        return 1;
    }
    printf("%.12g %llu\n", m.throughput, (unsigned long long)m.states);
    st = cran_arq_config_set_delta(cfg, 0);
    cran_arq_config_free(cfg);
    return st == CRAN_ARQ_STATUS_CONFIG ? 0 : 2;
}
