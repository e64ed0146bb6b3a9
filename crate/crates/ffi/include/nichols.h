#ifndef NICHOLS_H
#define NICHOLS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error codes returned by every fallible entry point.
 */
typedef enum {
  NLA_STATUS_OK = 0,
  NLA_STATUS_INVALID_ARGUMENT = 1,
  NLA_STATUS_PARSE_ERROR = 2,
  NLA_STATUS_CONSTRAINT_VIOLATION = 3,
  NLA_STATUS_COLLAPSED_TO_ZERO = 4,
  NLA_STATUS_INCONCLUSIVE = 5,
  NLA_STATUS_INTERNAL_ERROR = 6,
} NlaStatus;

/**
 * An instance handle: a realization together with a parameter family.
 */
typedef struct NlaInstance NlaInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message, or NULL when no error has occurred.
 * The returned pointer stays valid until the next failing call.
 */
const char *nla_last_error(void);

/**
 * Release a string returned by this library.
 */
void nla_string_free(char *s);

/**
 * Create an instance from realization JSON and optional parameter JSON
 * (pass NULL for an undeformed instance). On success writes a handle.
 */
NlaStatus nla_instance_new(const char *realization_json,
                           const char *params_json,
                           NlaInstance **out);

/**
 * Destroy an instance handle.
 */
void nla_instance_free(NlaInstance *h);

/**
 * Constraint report: empty string when all constraints hold, otherwise one
 * violation per line.
 */
NlaStatus nla_check_params(const NlaInstance *h, char **out);

/**
 * Relation list of a presentation, one "label: lhs = rhs" line per relation.
 * kind: 0 = Nichols, 1 = distinguished pre-Nichols, 2 = order-2 hat
 * quotient, 3 = cleft object, 4 = lifting.
 */
NlaStatus nla_present(const NlaInstance *h, int kind, char **out);

/**
 * Normal form of expression text in the chosen quotient, completed up to
 * `bound` (pass 0 for the default 2*N*theta).
 */
NlaStatus nla_reduce(const NlaInstance *h, int kind, const char *expr, int bound, char **out);

/**
 * Total number of irreducible words of the completed system.
 */
NlaStatus nla_dim(const NlaInstance *h, int kind, int bound, uint64_t *out_total);

/**
 * Closed form and oracle value of the deformed power relation for the root
 * (i, l), as "closed = ...\noracle = ...". Returns Inconclusive when the
 * two sides differ.
 */
NlaStatus nla_sigma(const NlaInstance *h, int i, int l, char **out);

/**
 * Run an identity suite; writes the textual report and the number of
 * non-passing entries.
 */
NlaStatus nla_verify_suite(const NlaInstance *h,
                           const char *suite,
                           char **out_report,
                           uint64_t *out_failures);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NICHOLS_H */
