/* C interface to the CLMM swap, valuation, and JIT strategy library.
 *
 * Conventions:
 *   - Every function returns a clmm_status; CLMM_OK means success.
 *   - On failure, clmm_last_error() returns a thread-local message
 *     describing the most recent error on the calling thread.
 *   - Output strings (char**) are UTF-8 JSON documents owned by the
 *     caller; release them with clmm_string_free().
 *   - Pool handles are opaque and immutable; free with clmm_pool_free().
 *   - All functions are safe to call from multiple threads as long as
 *     each pool handle is freed only once.
 */
#ifndef CLMMJIT_H
#define CLMMJIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clmm_status {
    CLMM_OK = 0,
    CLMM_ERR_INVALID_ARGUMENT = 1,   /* bad value or precondition violated */
    CLMM_ERR_PARSE = 2,              /* malformed document */
    CLMM_ERR_IO = 3,                 /* file unreadable or unwritable */
    CLMM_ERR_INSUFFICIENT_LIQUIDITY = 4, /* trade exhausts the tick grid */
    CLMM_ERR_BUDGET = 5,             /* dollar budget cannot fund the request */
    CLMM_ERR_INTERNAL = 6            /* cross-check or invariant failure */
} clmm_status;

typedef enum clmm_direction {
    CLMM_X_IN = 0, /* sell token X, pool price falls */
    CLMM_Y_IN = 1  /* sell token Y, pool price rises */
} clmm_direction;

typedef struct clmm_pool clmm_pool;

/* Message for the most recent failure on this thread; never NULL. */
const char* clmm_last_error(void);

/* Frees a string returned through a char** output. NULL is a no-op. */
void clmm_string_free(char* s);

/* Library version as "major.minor.patch". Static storage; do not free. */
const char* clmm_version(void);

/* ===== pool snapshots ===== */

/* Parses a pool snapshot document (see docs for the schema). */
clmm_status clmm_pool_from_json(const char* json_text, clmm_pool** out_pool);
clmm_status clmm_pool_from_file(const char* path, clmm_pool** out_pool);
void clmm_pool_free(clmm_pool* pool);

/* Serializes the pool back to its document form. */
clmm_status clmm_pool_info(const clmm_pool* pool, char** out_json);

/* ===== swap engine ===== */

/* Executes a trade against the pool; out_json reports amount_out,
 * final_price, and dollar fees (input valued at input_price_usd). */
clmm_status clmm_swap_execute(const clmm_pool* pool, double amount_in,
                              clmm_direction direction, double input_price_usd,
                              char** out_json);

/* Compares the fast tick-walk against a micro-step integration of the
 * same trade. `steps_per_interval` <= 0 picks the default resolution.
 * Returns CLMM_OK even when the comparison fails; inspect "passed". */
clmm_status clmm_oracle_check(const clmm_pool* pool, double amount_in,
                              clmm_direction direction, double tolerance,
                              long steps_per_interval, char** out_json);

/* ===== valuation ===== */

/* Dollar value change of the position (liquidity, lower, upper) when
 * the pool price moves from q to q_prime at market prices px, py. */
clmm_status clmm_price_impact(double liquidity, double lower, double upper, double q,
                              double q_prime, double px, double py, char** out_json);

/* Classifies the move q -> q_prime against the market price px/py and,
 * when q_prime differs from q, the strategic setting it creates. */
clmm_status clmm_classify_move(double q, double q_prime, double px, double py,
                               char** out_json);

/* ===== strategy search ===== */

/* Finds the best single-range liquidity response to the trade described
 * by trade_json, under config_json (NULL keeps defaults). */
clmm_status clmm_optimize(const clmm_pool* pool, const char* trade_json,
                          const char* config_json, char** out_json);

/* ===== corpus replay ===== */

/* Replays a swap corpus (CSV + pool snapshot directory). Writes one
 * record per event to records_csv_path (NULL skips the file) and
 * returns the aggregate summary document. */
clmm_status clmm_replay(const char* swaps_csv_path, const char* pools_dir,
                        const char* config_json, const char* records_csv_path,
                        char** out_summary_json);

/* Re-optimizes the corpus at each budget multiplier and writes the
 * aggregated curves to sweep_csv_path (NULL skips the file). */
clmm_status clmm_budget_sweep(const char* swaps_csv_path, const char* pools_dir,
                              const char* config_json, const double* multipliers,
                              size_t multiplier_count, const char* sweep_csv_path,
                              char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* CLMMJIT_H */
