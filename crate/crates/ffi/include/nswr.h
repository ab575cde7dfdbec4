#ifndef NSWR_H
#define NSWR_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NswrStatus {
  NSWR_STATUS_OK = 0,
  NSWR_STATUS_NULL_POINTER = 1,
  NSWR_STATUS_INVALID_ARGUMENT = 2,
  // The instance is too large for the chosen solver.
  NSWR_STATUS_TOO_LARGE = 3,
  NSWR_STATUS_IO = 4,
  NSWR_STATUS_PARSE = 5,
  NSWR_STATUS_BUFFER_TOO_SMALL = 6,
  NSWR_STATUS_PANIC = 7,
} NswrStatus;

typedef enum NswrAlgorithm {
  NSWR_ALGORITHM_EXHAUSTIVE = 0,
  NSWR_ALGORITHM_SUBSET_DP = 1,
  NSWR_ALGORITHM_WINDOW_DP = 2,
  NSWR_ALGORITHM_INSERTION = 3,
  NSWR_ALGORITHM_QUERY_EFFICIENT = 4,
} NswrAlgorithm;

typedef enum NswrResort {
  NSWR_RESORT_FULL = 0,
  NSWR_RESORT_LOCAL = 1,
} NswrResort;

typedef enum NswrRefine {
  NSWR_REFINE_OFF = 0,
  NSWR_REFINE_SCAN = 1,
  NSWR_REFINE_BISECT = 2,
} NswrRefine;

typedef struct NswrRanking NswrRanking;

// A complete tournament, optionally with the hidden ranking it was
// generated from.
typedef struct NswrTournament NswrTournament;

// Solver parameters. `polish_radius = 0` means unlimited.
typedef struct NswrParams {
  size_t window;
  size_t block_len;
  size_t majority_k;
  size_t walk_steps;
  size_t interval_len_min;
  size_t interval_len_max;
  size_t trim;
  double beta;
  uint64_t seed;
  enum NswrResort resort;
  enum NswrRefine refine;
  size_t polish_span;
  size_t polish_radius;
  size_t checkpoint_max;
  size_t max_passes;
} NswrParams;

typedef struct NswrQueryStats {
  uint64_t distinct_queries;
  uint64_t total_accesses;
} NswrQueryStats;

typedef struct NswrTheoryConstants {
  double epsilon;
  double p1;
  double m1;
  double m2;
  double c2;
  double c3;
  double c4;
  size_t majority_k;
  double c_walk;
  double c;
} NswrTheoryConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *nswr_last_error(void);

// Library version as a static nul-terminated string.
const char *nswr_version(void);

// Generates a tournament over a random hidden ranking; every comparison
// is correct with probability `1/2 + gamma`.
//
// # Safety
// `out` must be valid for writes.
enum NswrStatus nswr_tournament_generate(size_t n,
                                         double gamma,
                                         uint64_t seed,
                                         struct NswrTournament **out_tournament);

// Builds a tournament from an `n * n` row-major matrix whose entry
// `(i, j)` is `+1` when item `i` beat item `j` and `-1` otherwise. The
// diagonal is ignored; the matrix must be antisymmetric.
//
// # Safety
// `outcomes` must point to `n * n` readable values; `out` must be valid
// for writes.
enum NswrStatus nswr_tournament_from_matrix(size_t n,
                                            const int8_t *outcomes,
                                            struct NswrTournament **out_tournament);

// Reads a tournament CSV (`item_a,item_b,outcome`). Items are indexed in
// order of first appearance.
//
// # Safety
// `path` must be a nul-terminated string; `out` must be valid for writes.
enum NswrStatus nswr_tournament_load_csv(const char *path, struct NswrTournament **out_tournament);

// # Safety
// `t` must be null or a handle from this library not yet freed.
void nswr_tournament_free(struct NswrTournament *t);

// Number of items, 0 for a null handle.
//
// # Safety
// `t` must be null or a live handle.
size_t nswr_tournament_len(const struct NswrTournament *t);

// Outcome of `i` against `j`: `+1` if `i` won.
//
// # Safety
// `t` must be a live handle and `out` valid for writes.
enum NswrStatus nswr_tournament_query(const struct NswrTournament *t,
                                      size_t i,
                                      size_t j,
                                      int8_t *out_outcome);

// The hidden ranking of a generated tournament.
//
// # Safety
// `t` must be a live handle and `out` valid for writes.
enum NswrStatus nswr_tournament_truth(const struct NswrTournament *t,
                                      struct NswrRanking **out_ranking);

// Ranking from `ranks[item]`, a permutation of `0..n`.
//
// # Safety
// `ranks` must point to `n` readable values; `out` must be valid for
// writes.
enum NswrStatus nswr_ranking_from_ranks(const size_t *ranks,
                                        size_t n,
                                        struct NswrRanking **out_ranking);

// # Safety
// `r` must be null or a handle from this library not yet freed.
void nswr_ranking_free(struct NswrRanking *r);

// # Safety
// `r` must be null or a live handle.
size_t nswr_ranking_len(const struct NswrRanking *r);

// Writes `rank[item]` for every item.
//
// # Safety
// `r` must be a live handle; `buf` must hold `capacity` writable values.
enum NswrStatus nswr_ranking_ranks(const struct NswrRanking *r, size_t *buf, size_t capacity);

// Writes the items from smallest to largest.
//
// # Safety
// `r` must be a live handle; `buf` must hold `capacity` writable values.
enum NswrStatus nswr_ranking_order(const struct NswrRanking *r, size_t *buf, size_t capacity);

// Agreeing pairs minus upsets of `r` on `t`.
//
// # Safety
// Both handles must be live and `out` valid for writes.
enum NswrStatus nswr_score(const struct NswrTournament *t,
                           const struct NswrRanking *r,
                           int64_t *out_score);

// Calibrated parameters of `algorithm` for `n` items at noise level
// `gamma`.
//
// # Safety
// `out` must be valid for writes.
enum NswrStatus nswr_params_default(enum NswrAlgorithm algorithm,
                                    size_t n,
                                    double gamma,
                                    struct NswrParams *out_params);

// Ranks the items of `t`. `params` may be null for the calibrated
// defaults at `gamma = 0.25`. `out_stats` may be null.
//
// # Safety
// `t` must be a live handle, `params` null or readable, `out_ranking`
// valid for writes and `out_stats` null or valid for writes.
enum NswrStatus nswr_solve(const struct NswrTournament *t,
                           enum NswrAlgorithm algorithm,
                           const struct NswrParams *params,
                           struct NswrRanking **out_ranking,
                           struct NswrQueryStats *out_stats);

// Constants of the asymptotic analysis. `epsilon <= 0` selects the
// default `n^(-beta-1) / 4`.
//
// # Safety
// `out` must be valid for writes.
enum NswrStatus nswr_theory_constants(double gamma,
                                      double beta,
                                      size_t n,
                                      double epsilon,
                                      struct NswrTheoryConstants *out_constants);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NSWR_H */
