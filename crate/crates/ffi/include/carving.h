#ifndef CARVING_H
#define CARVING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CarvingStatus {
  CARVING_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CARVING_STATUS_NULL_POINTER = 1,
  /**
   * Arguments are out of range or violate a documented requirement.
   */
  CARVING_STATUS_INVALID_INPUT = 2,
  /**
   * Text input could not be parsed.
   */
  CARVING_STATUS_PARSE = 3,
  /**
   * A configured enumeration cap was exceeded.
   */
  CARVING_STATUS_SIZE_CAP = 4,
  /**
   * The solver found no feasible solution.
   */
  CARVING_STATUS_INFEASIBLE = 5,
  /**
   * An output buffer is too small; the required length was still written.
   */
  CARVING_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * An internal invariant failed.
   */
  CARVING_STATUS_INTERNAL = 7,
  /**
   * A panic was caught at the boundary.
   */
  CARVING_STATUS_PANIC = 8,
} CarvingStatus;

/**
 * Problem selector for [`carving_solve`].
 */
typedef enum CarvingProblem {
  /**
   * Maximum weight independent set.
   */
  CARVING_PROBLEM_MWIS = 0,
  /**
   * Maximum weight induced forest; its complement is a minimum weight
   * feedback vertex set.
   */
  CARVING_PROBLEM_FVS = 1,
} CarvingProblem;

/**
 * Opaque graph handle.
 */
typedef struct CarvingGraph CarvingGraph;

/**
 * Opaque solution handle.
 */
typedef struct CarvingSolution CarvingSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an edgeless graph on `n` vertices (at most 64).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CarvingStatus carving_graph_new(size_t n, struct CarvingGraph **out);

/**
 * Parses a graph in the text format (`n m` then `m` lines `u v`).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CarvingStatus carving_graph_parse(const char *text, struct CarvingGraph **out);

/**
 * Adds the edge `uv` (a no-op if present); loops and out-of-range
 * endpoints are rejected.
 *
 * # Safety
 * `graph` must be a live handle from this library.
 */
enum CarvingStatus carving_graph_add_edge(struct CarvingGraph *graph, size_t u, size_t v);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle from this library.
 */
size_t carving_graph_vertex_count(const struct CarvingGraph *graph);

/**
 * Whether the graph has no induced path on six vertices; false for null.
 *
 * # Safety
 * `graph` must be null or a live handle from this library.
 */
bool carving_graph_is_p6_free(const struct CarvingGraph *graph);

/**
 * Releases a graph handle; null is ignored.
 *
 * # Safety
 * `graph` must be null or a live handle not used afterwards.
 */
void carving_graph_free(struct CarvingGraph *graph);

/**
 * Solves `problem` on a P6-free graph. `weights` may be null for unit
 * weights; otherwise it must hold `weight_count == n` positive entries.
 * `depth == 0` selects the default depth (1 for MWIS, 3 for FVS; MWIS
 * always uses 1) and `defect == 0` makes the defect equal to the depth.
 *
 * # Safety
 * `graph` must be a live handle, `weights` null or valid for
 * `weight_count` reads, and `out` a valid pointer.
 */
enum CarvingStatus carving_solve(const struct CarvingGraph *graph,
                                 enum CarvingProblem problem,
                                 const uint64_t *weights,
                                 size_t weight_count,
                                 size_t depth,
                                 size_t defect,
                                 struct CarvingSolution **out);

/**
 * Weight of the solution, or 0 for null.
 *
 * # Safety
 * `solution` must be null or a live handle from this library.
 */
uint64_t carving_solution_weight(const struct CarvingSolution *solution);

/**
 * Size of the carver family the solver used, or 0 for null.
 *
 * # Safety
 * `solution` must be null or a live handle from this library.
 */
size_t carving_solution_family_size(const struct CarvingSolution *solution);

/**
 * Copies the chosen vertices (independent set or forest), ascending, into
 * `buf`. `*len` always receives the number of vertices; if `cap` is too
 * small nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `solution` must be a live handle, `buf` valid for `cap` writes (or null
 * when `cap == 0`) and `len` a valid pointer.
 */
enum CarvingStatus carving_solution_vertices(const struct CarvingSolution *solution,
                                             size_t *buf,
                                             size_t cap,
                                             size_t *len);

/**
 * Copies the complement of the chosen vertices (for FVS, the feedback
 * vertex set) with the same buffer protocol as
 * [`carving_solution_vertices`].
 *
 * # Safety
 * Same as [`carving_solution_vertices`].
 */
enum CarvingStatus carving_solution_complement(const struct CarvingSolution *solution,
                                               size_t *buf,
                                               size_t cap,
                                               size_t *len);

/**
 * Releases a solution handle; null is ignored.
 *
 * # Safety
 * `solution` must be null or a live handle not used afterwards.
 */
void carving_solution_free(struct CarvingSolution *solution);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to fit, into `buf`; returns the full message length in bytes
 * (excluding the terminator). Passing `cap == 0` only queries the length.
 *
 * # Safety
 * `buf` must be valid for `cap` writes, or null when `cap == 0`.
 */
size_t carving_last_error_message(char *buf, size_t cap);

/**
 * Static description of a status code.
 */
const char *carving_status_name(enum CarvingStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARVING_H */
