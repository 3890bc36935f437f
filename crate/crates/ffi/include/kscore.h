#ifndef KSCORE_H
#define KSCORE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KsStatus {
  KS_STATUS_OK = 0,
  KS_STATUS_NULL_POINTER = 1,
  KS_STATUS_INVALID_ARGUMENT = 2,
  KS_STATUS_DIMENSION = 3,
  KS_STATUS_AMBIGUITY = 4,
  KS_STATUS_NOT_PROJECTOR = 5,
  KS_STATUS_BUDGET = 6,
  KS_STATUS_PRECONDITION = 7,
  KS_STATUS_INTEGRITY = 8,
  KS_STATUS_CONVERGENCE = 9,
  KS_STATUS_PARSE = 10,
  KS_STATUS_IO = 11,
  KS_STATUS_PANIC = 12,
} KsStatus;

// Built-in operator sets.
typedef enum KsFixture {
  KS_FIXTURE_CABELLO18 = 0,
  KS_FIXTURE_PERES24 = 1,
} KsFixture;

// Opaque graph.
typedef struct KsGraph KsGraph;

// Opaque operator set.
typedef struct KsOperatorSet KsOperatorSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ks_version(void);

// Message of the last failed call on this thread, or NULL. The pointer stays
// valid until the next call into this library on the same thread.
const char *ks_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void ks_string_free(char *s);

// Parses an operator-set JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum KsStatus ks_operator_set_from_json(const char *json,
                                        double zero_tol,
                                        double ambiguity_factor,
                                        struct KsOperatorSet **out);

// # Safety
// `out` must be writable.
enum KsStatus ks_operator_set_fixture(enum KsFixture which, struct KsOperatorSet **out);

// # Safety
// `set` must be NULL or a handle from this library not yet freed.
void ks_operator_set_free(struct KsOperatorSet *set);

// Number of elements, or 0 for NULL.
//
// # Safety
// `set` must be NULL or a live handle.
size_t ks_operator_set_len(const struct KsOperatorSet *set);

// Hilbert space dimension, or 0 for NULL.
//
// # Safety
// `set` must be NULL or a live handle.
size_t ks_operator_set_dim(const struct KsOperatorSet *set);

// Serialises the set back to JSON.
//
// # Safety
// `set` must be a live handle; `out_json` must be writable.
enum KsStatus ks_operator_set_to_json(const struct KsOperatorSet *set, char **out_json);

// Classifies the set. `is_ks` receives 1 for a KS verdict and 0
// otherwise; `verdict_json`, if not NULL, receives the full verdict.
//
// # Safety
// `set` must be a live handle; `is_ks` must be writable; `verdict_json`
// must be NULL or writable.
enum KsStatus ks_classify(const struct KsOperatorSet *set, int32_t *is_ks, char **verdict_json);

// Parses a graph in edge-list or DIMACS format.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum KsStatus ks_graph_from_text(const char *text, struct KsGraph **out);

// Orthogonality graph of the measurement multiset of `set`.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum KsStatus ks_graph_orthogonality(const struct KsOperatorSet *set, struct KsGraph **out);

// # Safety
// `out` must be writable.
enum KsStatus ks_graph_hadamard(size_t n, struct KsGraph **out);

// Cartesian (`strong == 0`) or strong product.
//
// # Safety
// `g` and `h` must be live handles; `out` must be writable.
enum KsStatus ks_graph_product(const struct KsGraph *g,
                               const struct KsGraph *h,
                               int32_t strong,
                               struct KsGraph **out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum KsStatus ks_graph_complement(const struct KsGraph *g, struct KsGraph **out);

// # Safety
// `g` must be NULL or a handle from this library not yet freed.
void ks_graph_free(struct KsGraph *g);

// # Safety
// `g` must be NULL or a live handle.
size_t ks_graph_vertices(const struct KsGraph *g);

// # Safety
// `g` must be NULL or a live handle.
size_t ks_graph_edges(const struct KsGraph *g);

// Serialises the graph in edge-list format.
//
// # Safety
// `g` must be a live handle; `out_text` must be writable.
enum KsStatus ks_graph_to_text(const struct KsGraph *g, char **out_text);

// Exact independence number; `max_vertices == 0` selects the default
// budget.
//
// # Safety
// `g` must be a live handle; `alpha` must be writable.
enum KsStatus ks_independence_number(const struct KsGraph *g, size_t max_vertices, size_t *alpha);

// Exact chromatic number; `max_vertices == 0` selects the default budget.
//
// # Safety
// `g` must be a live handle; `chi` must be writable.
enum KsStatus ks_chromatic_number(const struct KsGraph *g, size_t max_vertices, size_t *chi);

// Lovász theta bracketed by certified bounds `lower <= theta <= upper`.
//
// # Safety
// `g` must be a live handle; `lower` and `upper` must be writable.
enum KsStatus ks_lovasz_theta(const struct KsGraph *g, double eps, double *lower, double *upper);

// Builds the separation instance of a projective KS set and writes a JSON
// report with `c0`, the number of messages `k`, the strategy check and an
// independent set witness. `separated` receives 1 when `c0 < k` and the
// strategy verifies.
//
// # Safety
// `set` must be a live handle; `separated` and `out_json` must be writable.
enum KsStatus ks_certify_separation(const struct KsOperatorSet *set,
                                    int32_t *separated,
                                    char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSCORE_H */
