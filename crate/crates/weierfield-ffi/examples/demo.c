/* Minimal consumer of the weierfield C ABI: builds the classical field
 * (b = 2, cosine base), evaluates a jet, and checks harmonicity plus the
 * dimension-bound arithmetic.
 *
 * Build (from the workspace root, after `cargo build -p weierfield-ffi`):
 *   gcc -std=c99 -Icrates/weierfield-ffi/include examples-or-this-file.c \
 *       -Ltarget/debug -lweierfield_ffi -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include <math.h>
#include "weierfield.h"

static int fail(const char *what) {
    char msg[256];
    wf_last_error_message(msg, sizeof msg);
    fprintf(stderr, "FAIL %s: %s\n", what, msg);
    return 1;
}

int main(void) {
    const char *json =
        "{\"d\":1,\"terms\":[{\"k\":[1],\"re\":0.5,\"im\":0.0},"
        "{\"k\":[-1],\"re\":0.5,\"im\":0.0}]}";

    wf_trig *trig = NULL;
    if (wf_trig_from_json(json, &trig) != WF_OK) return fail("trig_from_json");

    wf_field *field = NULL;
    if (wf_field_new(trig, 2.0, 1e-12, &field) != WF_OK) return fail("field_new");
    wf_trig_free(trig);

    double x = 0.0, f0 = 0.0;
    if (wf_field_eval_boundary(field, &x, 1, &f0) != WF_OK) return fail("eval_boundary");
    if (fabs(f0 - 2.0) > 1e-10) {
        fprintf(stderr, "FAIL boundary value: f(0) = %.15g, expected 2\n", f0);
        return 1;
    }

    double xs = 0.37, value = 0.0, gradient[2] = {0}, hessian[3] = {0};
    if (wf_field_jet(field, &xs, 1, 0.05, &value, gradient, hessian) != WF_OK)
        return fail("field_jet");
    double trace = hessian[0] + hessian[2];
    double scale = sqrt(hessian[0] * hessian[0] + 2.0 * hessian[1] * hessian[1]
                        + hessian[2] * hessian[2]);
    if (fabs(trace) > 1e-9 * (1.0 + scale)) {
        fprintf(stderr, "FAIL harmonicity: trace %.3e at scale %.3e\n", trace, scale);
        return 1;
    }
    wf_field_free(field);

    double bound = 0.0;
    bool valid = false;
    if (wf_hungerford_bound(0.25, 0.5, 1, &bound, &valid) != WF_OK)
        return fail("hungerford_bound");
    if (!valid || fabs(bound - 0.5) > 1e-15) {
        fprintf(stderr, "FAIL dimension bound: %.15g (valid=%d)\n", bound, (int)valid);
        return 1;
    }

    printf("weierfield %s: f(0)=%.12g, jet value %.12g, |trace HF| %.3e, bound %.3g\n",
           wf_version(), f0, value, fabs(trace), bound);
    return 0;
}
