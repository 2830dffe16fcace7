#ifndef SEPOOL_H
#define SEPOOL_H

/* Generated by cbindgen from the sepool-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SepStatus {
  SEP_STATUS_OK = 0,
  SEP_STATUS_NULL_POINTER = 1,
  SEP_STATUS_INVALID_ARGUMENT = 2,
  SEP_STATUS_IO = 3,
  SEP_STATUS_PARSE = 4,
  SEP_STATUS_DOMAIN = 5,
  SEP_STATUS_STRUCTURAL = 6,
  SEP_STATUS_SHAPE = 7,
  SEP_STATUS_BUFFER_TOO_SMALL = 8,
  SEP_STATUS_PANIC = 9,
} SepStatus;

/**
 * An undirected weighted graph.
 */
typedef struct SepGraph SepGraph;

/**
 * A coding tree of fixed height together with its assignment matrices.
 */
typedef struct SepTree SepTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next library call on the same thread.
 */
const char *sep_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sep_version(void);

/**
 * Builds a graph on `node_count` nodes from `edge_count` edges given as
 * parallel arrays. `weights` may be NULL for unit weights.
 *
 * # Safety
 * `us` and `vs` (and `weights` when non-NULL) must point to `edge_count`
 * readable elements. `out` must be a valid pointer.
 */
enum SepStatus sep_graph_from_edges(size_t node_count,
                                    const size_t *us,
                                    const size_t *vs,
                                    const double *weights,
                                    size_t edge_count,
                                    struct SepGraph **out);

/**
 * Reads an edge-list file. With `weighted == false` a weight column is
 * ignored.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SepStatus sep_graph_load(const char *path, bool weighted, struct SepGraph **out);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void sep_graph_free(struct SepGraph *graph);

/**
 * Node count, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t sep_graph_node_count(const struct SepGraph *graph);

/**
 * Number of distinct undirected edges, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t sep_graph_edge_count(const struct SepGraph *graph);

/**
 * Sum of weighted degrees, or NaN for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
double sep_graph_volume(const struct SepGraph *graph);

/**
 * Builds a coding tree of height `k > 1`.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum SepStatus sep_tree_build(const struct SepGraph *graph, size_t k, struct SepTree **out);

/**
 * # Safety
 * `tree` must be NULL or a handle from this library not yet freed.
 */
void sep_tree_free(struct SepTree *tree);

/**
 * Structural entropy in bits, or NaN for NULL.
 *
 * # Safety
 * `tree` must be NULL or a live handle.
 */
double sep_tree_entropy(const struct SepTree *tree);

/**
 * Tree height, or 0 for NULL.
 *
 * # Safety
 * `tree` must be NULL or a live handle.
 */
size_t sep_tree_height(const struct SepTree *tree);

/**
 * Number of clusters at `level`: 0 is the graph itself, `k` is the root.
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum SepStatus sep_tree_level_size(const struct SepTree *tree, size_t level, size_t *out);

/**
 * Copies the cluster index of every column of `S_level` (`1 <= level <= k`)
 * into `buf`. `*len` holds the buffer capacity on entry and the number of
 * columns on return, also when the buffer is too small.
 *
 * # Safety
 * `tree` must be a live handle, `len` a valid pointer, and `buf` must hold
 * `*len` writable elements (it may be NULL when `*len` is 0).
 */
enum SepStatus sep_tree_assignment(const struct SepTree *tree,
                                   size_t level,
                                   size_t *buf,
                                   size_t *len);

/**
 * Serializes the tree as JSON. Free the result with [`sep_string_free`].
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum SepStatus sep_tree_to_json(const struct SepTree *tree, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void sep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPOOL_H */
