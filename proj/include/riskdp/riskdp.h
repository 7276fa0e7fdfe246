/*
 * C interface to the riskdp solver.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a riskdp_status; on failure a description of
 * the error is available from riskdp_last_error() on the calling thread.
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with riskdp_string_free().
 */
#ifndef RISKDP_RISKDP_H
#define RISKDP_RISKDP_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(RISKDP_BUILDING)
#define RISKDP_API __declspec(dllexport)
#else
#define RISKDP_API __declspec(dllimport)
#endif
#else
#define RISKDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* The first five values double as the command-line exit codes. */
typedef enum riskdp_status {
    RISKDP_OK = 0,
    RISKDP_VERIFY_FAILED = 1,
    RISKDP_CONFIG_ERROR = 2,
    RISKDP_NOT_CONVERGED = 3,
    RISKDP_IO_ERROR = 4,
    RISKDP_DOMAIN_ERROR = 5,
    RISKDP_RESOURCE_ERROR = 6,
    RISKDP_INTERNAL_ERROR = 7
} riskdp_status;

typedef struct riskdp_config riskdp_config;
typedef struct riskdp_report riskdp_report;

RISKDP_API const char* riskdp_version(void);

/* Message for the last failed call on this thread ("" if none). */
RISKDP_API const char* riskdp_last_error(void);

RISKDP_API void riskdp_string_free(char* s);

/* Risk of a discrete distribution under a literal such as "avar(0.5)",
 * "mean_deviation(0.25)", "expectation" or "kusuoka(0:0.5,0.5:0.5)". */
RISKDP_API riskdp_status riskdp_risk_evaluate(const char* risk_literal, const double* values,
                                              const double* probs, size_t n, double* out);

/* Configuration ------------------------------------------------------------ */

RISKDP_API riskdp_status riskdp_config_load(const char* path, riskdp_config** out);
/* base_dir resolves a relative tabular model path; NULL means ".". */
RISKDP_API riskdp_status riskdp_config_parse(const char* json_text, const char* base_dir,
                                             riskdp_config** out);
RISKDP_API void riskdp_config_free(riskdp_config* config);
RISKDP_API riskdp_status riskdp_config_set_risk(riskdp_config* config, const char* risk_literal);
RISKDP_API const char* riskdp_config_output_dir(const riskdp_config* config);
RISKDP_API size_t riskdp_config_num_states(const riskdp_config* config);

/* Solve -------------------------------------------------------------------- */

/* Produces a report even when value iteration does not converge; check
 * riskdp_report_converged(). */
RISKDP_API riskdp_status riskdp_solve(const riskdp_config* config, riskdp_report** out);
RISKDP_API void riskdp_report_free(riskdp_report* report);

RISKDP_API int riskdp_report_converged(const riskdp_report* report);
RISKDP_API size_t riskdp_report_sweeps(const riskdp_report* report);
RISKDP_API size_t riskdp_report_horizon(const riskdp_report* report);
RISKDP_API double riskdp_report_last_residual(const riskdp_report* report);
RISKDP_API double riskdp_report_value_at_x0(const riskdp_report* report);
RISKDP_API size_t riskdp_report_num_states(const riskdp_report* report);
/* Copies min(n, num_states) converged values into out; returns the count. */
RISKDP_API size_t riskdp_report_converged_value(const riskdp_report* report, double* out,
                                                size_t n);

RISKDP_API riskdp_status riskdp_report_json(const riskdp_report* report, char** out);
RISKDP_API riskdp_status riskdp_report_values_csv(const riskdp_report* report, char** out);
RISKDP_API riskdp_status riskdp_report_policy_csv(const riskdp_report* report, char** out);

/* Evaluate / verify / sweep ------------------------------------------------ */

/* Nested value of the policy in policy_csv ("stage,state,action" rows) at
 * the configured horizon, returned as values CSV text. */
RISKDP_API riskdp_status riskdp_evaluate(const riskdp_config* config, const char* policy_csv,
                                         char** values_csv);

/* Runs the oracle-agreement suites. *passed is 1 when all suites pass;
 * *counterexample_json is "" in that case. corrupt_cap is a harness test hook. */
RISKDP_API riskdp_status riskdp_verify(const riskdp_config* config, int corrupt_cap, int* passed,
                                       char** table, char** counterexample_json);

/* Re-solves for each value of "alpha" or "kappa". *monotone reports whether
 * V*(x0) is nondecreasing in alpha (always 1 for kappa). Returns
 * RISKDP_NOT_CONVERGED (with the CSV still filled) if any solve failed to converge. */
RISKDP_API riskdp_status riskdp_sweep(const riskdp_config* config, const char* param,
                                      const double* values, size_t n, char** csv, int* monotone);

#ifdef __cplusplus
}
#endif

#endif /* RISKDP_RISKDP_H */
