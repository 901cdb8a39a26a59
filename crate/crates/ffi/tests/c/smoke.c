#include <stdio.h>
#include "bridge_alloc.h"

int main(void) {
    BaScenario *s = NULL;
    BaOutcome out;
    if (ba_scenario_new(600.0, 0.0, 400.0, 0.0, 130.0, 130.0, &s) != BA_STATUS_OK) return 1;
    ba_scenario_add_asset(s, "A", 0.45, 0.5, 0.55, true, false);
    ba_scenario_add_asset(s, "B", 0.52, 0.56, 0.60, false, true);
    if (ba_scenario_evaluate(s, &out) != BA_STATUS_OK) return 2;
    ba_scenario_free(s);
    printf("%.6f %.6f\n", out.decision.delta_pq, out.decision.delta_qp);

    BaSimParams params;
    BaBatch *batch = NULL;
    ba_sim_params_default(&params);
    if (ba_batch_run(&params, &batch) != BA_STATUS_OK) return 3;
    printf("%zu\n", ba_batch_len(batch));
    ba_batch_free(batch);

    if (ba_scenario_new(100.0, -600.0, 400.0, 0.0, 1.0, 1.0, &s) != BA_STATUS_WITHDRAWAL_EXCEEDS_INVESTMENT) return 4;
    printf("%s\n", ba_last_error_message());
    return 0;
}
