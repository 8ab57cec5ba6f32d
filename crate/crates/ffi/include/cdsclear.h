#ifndef CDSCLEAR_H
#define CDSCLEAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Success.
#define CDSCLEAR_OK 0

// A required pointer argument was null.
#define CDSCLEAR_ERR_NULL_POINTER -1

// An input string was not valid UTF-8.
#define CDSCLEAR_ERR_INVALID_UTF8 -2

// Input text could not be parsed.
#define CDSCLEAR_ERR_PARSE -3

// Input parsed but is invalid (unknown bank, malformed contract, bad vector, ...).
#define CDSCLEAR_ERR_INVALID_INPUT -4

// A precondition of the requested solver or construction is not met.
#define CDSCLEAR_ERR_PRECONDITION -5

// An index argument is out of range.
#define CDSCLEAR_ERR_OUT_OF_RANGE -6

// An internal panic was caught.
#define CDSCLEAR_ERR_PANIC -7

// Solver selection: acyclic, SCC procedure, branch enumeration, then iteration.
#define CDSCLEAR_SOLVER_AUTO 0

// Topological propagation on an acyclic auxiliary graph.
#define CDSCLEAR_SOLVER_ACYCLIC 1

// Branch enumeration for systems with dedicated CDS debtors.
#define CDSCLEAR_SOLVER_DEDICATED 2

// SCC-by-SCC procedure for systems without weakly switched cycles.
#define CDSCLEAR_SOLVER_SCC 3

// Damped fixed-point iteration.
#define CDSCLEAR_SOLVER_ITERATE 4

// Opaque solve report: one or more recovery vectors plus solver metadata.
typedef struct CdsclearReport CdsclearReport;

// Opaque financial system.
typedef struct CdsclearSystem CdsclearSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread (empty after a success). The pointer stays
// valid until the next call into this library on the same thread; do not free it.
const char *cdsclear_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cdsclear_version(void);

// Releases a string returned by this library. Null is ignored.
void cdsclear_string_free(char *s);

// Parses an instance document (JSON) into a new system handle.
int32_t cdsclear_system_from_json(const char *json, struct CdsclearSystem **out);

// Serializes a system back to an instance document.
int32_t cdsclear_system_to_json(const struct CdsclearSystem *sys, char **out);

// Releases a system handle. Null is ignored.
void cdsclear_system_free(struct CdsclearSystem *sys);

// Number of banks.
int32_t cdsclear_system_bank_count(const struct CdsclearSystem *sys, size_t *out);

// Id of bank `index`.
int32_t cdsclear_system_bank_id(const struct CdsclearSystem *sys, size_t index, char **out);

// Graphviz DOT rendering of the system.
int32_t cdsclear_system_export_dot(const struct CdsclearSystem *sys, char **out);

// Whether the auxiliary graph has a weakly switched cycle and a strongly switched cycle.
// Either output pointer may be null to skip it.
int32_t cdsclear_system_switched_cycles(const struct CdsclearSystem *sys,
                                        bool *weakly,
                                        bool *strongly);

// Solves for clearing recovery rates with one of the `CDSCLEAR_SOLVER_*` solvers.
// `eps` and `max_iter` configure iteration (used by the iterate solver and the automatic
// fallback). A report is produced even when iteration stops at `max_iter`; query
// [`cdsclear_report_converged`].
int32_t cdsclear_solve(const struct CdsclearSystem *sys,
                       int32_t solver,
                       double eps,
                       size_t max_iter,
                       struct CdsclearReport **out);

// Releases a report handle. Null is ignored.
void cdsclear_report_free(struct CdsclearReport *report);

// Name of the solver that produced the report (`acyclic`, `dedicated`, `scc`, `iterate`).
int32_t cdsclear_report_solver(const struct CdsclearReport *report, char **out);

// Number of recovery vectors in the report.
int32_t cdsclear_report_solution_count(const struct CdsclearReport *report, size_t *out);

// Whether the solver met its tolerance (always true for exact solvers).
int32_t cdsclear_report_converged(const struct CdsclearReport *report, bool *out);

// Number of warnings attached to the report (e.g. coefficient growth).
int32_t cdsclear_report_warning_count(const struct CdsclearReport *report, size_t *out);

// Recovery rate of `bank` in solution `solution`, as a double.
int32_t cdsclear_report_rate(const struct CdsclearReport *report,
                             size_t solution,
                             size_t bank,
                             double *out);

// Recovery rate of `bank` in solution `solution` as text: `p/q` for exact rationals,
// `(a + b*sqrt(d))/c` for surds, a decimal for floats.
int32_t cdsclear_report_rate_string(const struct CdsclearReport *report,
                                    size_t solution,
                                    size_t bank,
                                    char **out);

// Residual `‖r − f(r)‖∞` of a recovery vector given as JSON (bank id → rate string) and
// whether it is an exact clearing vector. The residual is written as an exact string.
int32_t cdsclear_verify_json(const struct CdsclearSystem *sys,
                             const char *vector_json,
                             char **residual,
                             bool *clearing);

// Closed-form clearing rate of the start junction of a fragment cycle such as
// `"g1a.g2b.d1.d2"`: the exact surd as text and its double value.
int32_t cdsclear_fragment_closed_form(const char *fragments, char **expression, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDSCLEAR_H */
