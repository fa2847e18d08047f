#include <stdio.h>
#include <stdlib.h>
#include "rangekit.h"

#define CHECK(x) do { if ((x) != RK_STATUS_OK) { char m[256]; rk_last_error(m, sizeof m); \
    fprintf(stderr, "%s failed: %s\n", #x, m); return 1; } } while (0)

int main(void) {
    uint64_t colors[] = {1, 2, 2, 3, 2, 1, 1, 1};
    RkStaticMode *ix = NULL;
    size_t pos = 0, len = 0;
    CHECK(rk_static_build(colors, 8, 0.5, &ix));
    CHECK(rk_static_query(ix, 5, 8, &pos));
    if (colors[pos - 1] != 1) return 2;
    if (rk_static_query(ix, 0, 3, &pos) != RK_STATUS_OUT_OF_RANGE) return 3;
    if (rk_static_serialize(ix, NULL, 0, &len) != RK_STATUS_BUFFER_TOO_SMALL || len == 0) return 4;
    uint8_t *buf = malloc(len);
    CHECK(rk_static_serialize(ix, buf, len, &len));
    RkStaticMode *back = NULL;
    CHECK(rk_static_deserialize(buf, len, &back));
    CHECK(rk_static_query(back, 1, 3, &pos));
    if (colors[pos - 1] != 2) return 5;
    free(buf);
    rk_static_free(ix);
    rk_static_free(back);

    RkDynamicMode *d = NULL;
    uint64_t c = 0;
    CHECK(rk_dynamic_new(1.0, 16, &d));
    for (size_t i = 0; i < 8; i++) CHECK(rk_dynamic_insert(d, i + 1, colors[i]));
    CHECK(rk_dynamic_query(d, 5, 8, &pos, &c));
    if (c != 1) return 6;
    rk_dynamic_free(d);
    printf("ok\n");
    return 0;
}
