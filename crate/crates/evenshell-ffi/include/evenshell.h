#ifndef EVENSHELL_H
#define EVENSHELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EsStatus {
  EsStatus_Ok = 0,
  EsStatus_NullPointer = 1,
  EsStatus_InvalidUtf8 = 2,
  EsStatus_Parse = 3,
  EsStatus_Domain = 4,
  EsStatus_BudgetExceeded = 5,
  EsStatus_BufferTooSmall = 6,
  EsStatus_Overflow = 7,
  EsStatus_Panic = 8,
} EsStatus;

/**
 * Opaque handle to a non-null even poset.
 */
typedef struct EsEvenPoset EsEvenPoset;

/**
 * Opaque multigraph handle.
 */
typedef struct EsGraph EsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *es_last_error(void);

/**
 * Parses graph-file text into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EsStatus es_graph_parse(const char *text, struct EsGraph **out);

/**
 * # Safety
 * `g` must come from [`es_graph_parse`] and not be freed twice. Null is ignored.
 */
void es_graph_free(struct EsGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum EsStatus es_graph_vertex_count(const struct EsGraph *g, uintptr_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum EsStatus es_graph_in_g_star(const struct EsGraph *g, bool *out);

/**
 * Family name of a connected graph, e.g. `P̃_{8,2}`, as a string to release
 * with [`es_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum EsStatus es_graph_family(const struct EsGraph *g, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void es_string_free(char *s);

/**
 * Betti numbers of the real toric manifold of `g`, written to `buf`.
 * `len` receives the vector length even when `cap` is too small.
 *
 * # Safety
 * `g` must be a live handle, `buf` must hold `cap` values, `len` must be valid.
 */
enum EsStatus es_graph_betti(const struct EsGraph *g, uint64_t *buf, uintptr_t cap, uintptr_t *len);

/**
 * Even poset of `g` with admissible collection `a` (whitespace-separated
 * tokens). A collection whose poset is null reports `Domain`.
 *
 * # Safety
 * `g` must be a live handle, `a` a NUL-terminated string, `out` valid.
 */
enum EsStatus es_even_poset_new(const struct EsGraph *g, const char *a, struct EsEvenPoset **out);

/**
 * # Safety
 * `p` must come from [`es_even_poset_new`] and not be freed twice. Null is ignored.
 */
void es_even_poset_free(struct EsEvenPoset *p);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum EsStatus es_even_poset_len(const struct EsEvenPoset *p, uintptr_t *out);

/**
 * Number of falling chains under a verified recursive atom ordering.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum EsStatus es_even_poset_falling_count(const struct EsEvenPoset *p,
                                          uint64_t budget,
                                          uintptr_t *out);

/**
 * The closed-form bundle-path table, row-major: 9 rows (i = 0..8) by 14
 * columns (n = 2..15).
 *
 * # Safety
 * `buf` must hold `cap` values and `len` must be valid.
 */
enum EsStatus es_table4(uint64_t *buf, uintptr_t cap, uintptr_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVENSHELL_H */
