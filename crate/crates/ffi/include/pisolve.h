/* C interface for the pisolve semi-Markov game solver.
 *
 * Games are opaque handles obtained from pisolve_game_parse. Every call
 * returns a status code (PISOLVE_OK is 0); structured results come back as
 * heap-allocated JSON strings released with pisolve_string_free. After a
 * nonzero status, pisolve_last_error returns a message for the calling
 * thread (also to be released with pisolve_string_free), or NULL.
 *
 * Keep this header in sync with crates/ffi/src/lib.rs; the layout test in
 * crates/ffi/tests/capi.rs checks the declarations against the exported
 * symbols.
 */

#ifndef PISOLVE_H
#define PISOLVE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    PISOLVE_OK = 0,
    /* instance violates model rules (stochasticity, ownership, bounds) */
    PISOLVE_ERR_INVALID = 1,
    /* malformed JSON, bad rational literal, or bad argument */
    PISOLVE_ERR_PARSE = 2,
    /* linear-program solver failure */
    PISOLVE_ERR_SOLVER = 3,
    /* LP and enumeration disagree beyond tolerance */
    PISOLVE_ERR_DISAGREEMENT = 4,
    /* enumeration would exceed the policy cap */
    PISOLVE_ERR_CAP = 5,
    /* strategy JSON does not match the instance */
    PISOLVE_ERR_STRATEGY = 6,
    /* verification found improving deviations */
    PISOLVE_DEVIATIONS_FOUND = 7,
    /* a required pointer argument was NULL */
    PISOLVE_ERR_NULL = 8,
    /* internal panic */
    PISOLVE_ERR_PANIC = 9
};

typedef struct PisolveGame PisolveGame;

/* Parse an instance from JSON into a fresh handle. */
int32_t pisolve_game_parse(const char *json, PisolveGame **out);

/* Release a handle. NULL is ignored. */
void pisolve_game_free(PisolveGame *game);

/* Validate; *report_json receives the full report either way. */
int32_t pisolve_game_validate(const PisolveGame *game, char **report_json);

/* Reduce, solve one program per initial state, lift the profile.
 * with_oracle != 0 adds the exact enumeration cross-check. */
int32_t pisolve_game_solve(const PisolveGame *game, int32_t with_oracle,
                           uint64_t cap, char **report_json);

/* Policy-to-value table by exact enumeration. */
int32_t pisolve_game_enumerate(const PisolveGame *game, uint64_t cap,
                               char **table_json);

/* Check a strategy profile (the solve report's "profile" field) for
 * improving unilateral deviations. own_reward != 0 compares each player's
 * own accumulated reward; 0 compares the owner-spliced criterion.
 * tol is a rational literal such as "1/1000000". */
int32_t pisolve_game_verify(const PisolveGame *game, const char *strategy_json,
                            int32_t own_reward, const char *tol, uint64_t cap,
                            char **report_json);

/* Monte Carlo estimate of the profile's payoffs from initial_state, with
 * analytic values alongside. */
int32_t pisolve_game_simulate(const PisolveGame *game, const char *strategy_json,
                              uint32_t initial_state, uint64_t steps,
                              uint64_t seed, uint32_t replications,
                              char **report_json);

/* Message for the last failure on this thread, or NULL. Caller frees. */
char *pisolve_last_error(void);

/* Release any string returned by this library. NULL is ignored. */
void pisolve_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* PISOLVE_H */
