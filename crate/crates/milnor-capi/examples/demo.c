/* Minimal consumer of the milnor C ABI: build an arrangement, inspect its
 * monodromy, and count Milnor fiber points over a small prime field.
 *
 * Build (from the crate root, after `cargo build -p milnor-capi`):
 *   cc -I include examples/demo.c ../../target/debug/libmilnor_capi.a \
 *      -lpthread -ldl -lm -o demo
 */

#include <inttypes.h>
#include <stdio.h>

#include "milnor.h"

int main(void) {
    MilnorArrangement *a = NULL;
    MilnorStatus st = milnor_arrangement_builtin("a11", &a);
    if (st != MILNOR_STATUS_OK) {
        fprintf(stderr, "builtin failed: %s\n", milnor_last_error());
        return 1;
    }

    size_t order = 0;
    st = milnor_arrangement_monodromy_order(a, &order);
    if (st != MILNOR_STATUS_OK) {
        fprintf(stderr, "monodromy failed: %s\n", milnor_last_error());
        return 1;
    }
    printf("dim=%zu degree=%zu d0=%zu\n",
           milnor_arrangement_dim(a), milnor_arrangement_degree(a), order);

    char *poly = NULL;
    st = milnor_arrangement_candidate_polynomial(a, &poly);
    if (st != MILNOR_STATUS_OK) {
        fprintf(stderr, "candidate failed: %s\n", milnor_last_error());
        return 1;
    }
    printf("candidate: %s\n", poly);
    milnor_string_free(poly);

    MilnorCounter *c = NULL;
    st = milnor_counter_new(a, &c);
    milnor_arrangement_free(a); /* the counter keeps its own copy */
    if (st != MILNOR_STATUS_OK) {
        fprintf(stderr, "counter failed: %s\n", milnor_last_error());
        return 1;
    }

    uint64_t count = 0;
    st = milnor_counter_count(c, 5, MILNOR_METHOD_FACTORED, &count);
    if (st != MILNOR_STATUS_OK) {
        fprintf(stderr, "count failed: %s\n", milnor_last_error());
        milnor_counter_free(c);
        return 1;
    }
    printf("count5=%" PRIu64 "\n", count);

    milnor_counter_free(c);
    return 0;
}
