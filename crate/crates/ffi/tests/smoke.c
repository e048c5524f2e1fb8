#include <stdio.h>
#include <string.h>
#include "beliefmerge.h"

static const char *INSTANCE =
    "{\"variables\": [\"a\", \"b\"], \"profile\": [\"a & b\", \"!a & !b\"]}";

int main(void) {
    BmInstance *inst = NULL;
    if (bm_instance_from_json(INSTANCE, &inst) != BM_STATUS_OK) return 10;
    BmResult *res = NULL;
    if (bm_merge(inst, "equal", NULL, &res) != BM_STATUS_OK) return 11;
    size_t count = bm_result_model_count(res);
    char *json = NULL;
    if (bm_result_to_json(res, &json) != BM_STATUS_OK) return 12;
    printf("%zu %s\n", count, json);
    bm_string_free(json);
    bm_result_free(res);
    if (bm_merge(inst, "sometimes", NULL, &res) != BM_STATUS_INVALID_INPUT) return 13;
    if (bm_last_error_message() == NULL) return 14;
    bm_instance_free(inst);
    return 0;
}
