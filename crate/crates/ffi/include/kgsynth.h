#ifndef KGSYNTH_H
#define KGSYNTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum KgsStatus {
  KGS_STATUS_OK = 0,
  KGS_STATUS_USAGE = 1,
  KGS_STATUS_DATA = 2,
  KGS_STATUS_INFEASIBLE = 3,
  KGS_STATUS_INTERNAL = 4,
} KgsStatus;

/**
 * Opaque graph handle.
 */
typedef struct KgsGraph KgsGraph;

typedef struct KgsStats {
  uint64_t entities;
  uint64_t relations;
  uint64_t train;
  uint64_t valid;
  uint64_t test;
} KgsStats;

typedef struct KgsMetrics {
  double hits_at_1;
  double hits_at_3;
  double hits_at_10;
  double mr;
  double mrr;
  uint64_t count;
} KgsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *kgs_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *kgs_version(void);

/**
 * Loads a dataset directory into a new handle written to `*out`.
 *
 * # Safety
 * `dir` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KgsStatus kgs_graph_load(const char *dir, struct KgsGraph **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `graph` must come from this library and not be used afterwards.
 */
void kgs_graph_free(struct KgsGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum KgsStatus kgs_graph_stats(const struct KgsGraph *graph, struct KgsStats *out);

/**
 * Writes the graph in the dataset layout.
 *
 * # Safety
 * `graph` must be a live handle and `dir` a NUL-terminated string.
 */
enum KgsStatus kgs_graph_write(const struct KgsGraph *graph, const char *dir);

/**
 * Applies a recipe (`virtual-world`, `anonymized-entities`,
 * `inconsistent-descriptions`, `fully-anonymized`) to the targets (e.g.
 * `"entities,relations"` or `"er"`) and returns the variant as a new
 * handle.
 *
 * # Safety
 * `graph` must be a live handle, the strings NUL-terminated and `out`
 * a valid pointer.
 */
enum KgsStatus kgs_transform(const struct KgsGraph *graph,
                             const char *recipe,
                             const char *targets,
                             uint64_t seed,
                             struct KgsGraph **out);

/**
 * Like `kgs_transform`, but writes the variant with its mapping and
 * recipe files to `dir`.
 *
 * # Safety
 * As for `kgs_transform`; `dir` must be NUL-terminated.
 */
enum KgsStatus kgs_transform_to_dir(const struct KgsGraph *graph,
                                    const char *recipe,
                                    const char *targets,
                                    uint64_t seed,
                                    const char *dir);

/**
 * Writes the base dataset and the 12 default variants under `dir`.
 * Fails with the first variant error, after attempting all of them.
 *
 * # Safety
 * `graph` must be a live handle and `dir` NUL-terminated.
 */
enum KgsStatus kgs_suite_generate(const struct KgsGraph *graph, uint64_t seed, const char *dir);

/**
 * Scores a ranked-candidates file (see the CLI `evaluate` command) on
 * `split` (`train`, `valid` or `test`). `filtered` != 0 selects filtered
 * ranking.
 *
 * # Safety
 * `graph` must be a live handle, strings NUL-terminated, `out` valid.
 */
enum KgsStatus kgs_evaluate_predictions(const struct KgsGraph *graph,
                                        const char *predictions,
                                        int32_t filtered,
                                        const char *split,
                                        struct KgsMetrics *out);

/**
 * Aggregates `n` 1-based gold ranks.
 *
 * # Safety
 * `ranks` must point to `n` readable values and `out` be valid.
 */
enum KgsStatus kgs_compute_metrics(const uint64_t *ranks, size_t n, struct KgsMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KGSYNTH_H */
