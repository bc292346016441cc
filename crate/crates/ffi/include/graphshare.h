#ifndef GRAPHSHARE_H
#define GRAPHSHARE_H

/* Generated by cbindgen from graphshare-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every C ABI call.
 */
typedef enum GsStatus {
  GS_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  GS_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  GS_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument failed validation.
   */
  GS_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Input text did not parse; see `gs_last_error_message`.
   */
  GS_STATUS_PARSE_FAILED = 4,
  /**
   * Dealing or reconstruction failed; see `gs_last_error_message`.
   */
  GS_STATUS_SCHEME_FAILED = 5,
  /**
   * Fewer shares than the threshold and `force` was not set.
   */
  GS_STATUS_BELOW_THRESHOLD = 6,
} GsStatus;

/**
 * Opaque handle to a labeled simple graph.
 */
typedef struct GsGraph GsGraph;

/**
 * Opaque handle to a secret: alphabet names plus the graph on them.
 */
typedef struct GsGraphSecret GsGraphSecret;

/**
 * Opaque handle to one share of a graph deal.
 */
typedef struct GsGraphShare GsGraphShare;

/**
 * Opaque handle to the full result of one graph deal.
 */
typedef struct GsGraphShareList GsGraphShareList;

/**
 * Opaque handle to a list of strings.
 */
typedef struct GsStringList GsStringList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *gs_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 */
void gs_string_free(char *s);

/**
 * Releases the handle. NULL is ignored.
 */
void gs_graph_free(struct GsGraph *p);

/**
 * Releases the handle. NULL is ignored.
 */
void gs_graph_secret_free(struct GsGraphSecret *p);

/**
 * Releases the handle. NULL is ignored.
 */
void gs_graph_share_free(struct GsGraphShare *p);

/**
 * Releases the handle. NULL is ignored.
 */
void gs_share_list_free(struct GsGraphShareList *p);

/**
 * Releases the handle. NULL is ignored.
 */
void gs_string_list_free(struct GsStringList *p);

/**
 * Parses graph text (the `.g` format) into a handle.
 */
enum GsStatus gs_graph_parse(const char *text, struct GsGraph **out);

/**
 * Serializes a graph handle into `.g` text.
 */
enum GsStatus gs_graph_to_text(const struct GsGraph *graph, char **out);

/**
 * Renders a graph handle as Graphviz DOT.
 */
enum GsStatus gs_graph_to_dot(const struct GsGraph *graph, char **out);

enum GsStatus gs_graph_node_count(const struct GsGraph *graph, uint64_t *out);

enum GsStatus gs_graph_edge_count(const struct GsGraph *graph, uint64_t *out);

/**
 * Encodes an 8-character base-62 password as a graph on 11 nodes.
 */
enum GsStatus gs_password_encode(const char *password, struct GsGraph **out);

/**
 * Decodes a password graph back into its password.
 */
enum GsStatus gs_password_decode(const struct GsGraph *graph, char **out);

/**
 * Smallest padding node count b with C(b+c, c) >= 2^C(c,2).
 */
enum GsStatus gs_min_padding(uint64_t c, uint64_t *out);

/**
 * Reconstruction step count (b+c) + C(c,2) of the graph scheme.
 */
enum GsStatus gs_reconstruction_cost(uint64_t c, uint64_t b, uint64_t *out);

/**
 * bits^3, the flat cost model for a Shamir reconstruction at that width.
 */
enum GsStatus gs_shamir_cost(uint32_t bits, uint64_t *out);

/**
 * Builds a secret from comma-separated alphabet names and a graph on
 * positions 0..c-1. The graph handle is copied, not consumed.
 */
enum GsStatus gs_graph_secret_new(const char *alphabet_csv,
                                  const struct GsGraph *graph,
                                  struct GsGraphSecret **out);

/**
 * Comma-separated alphabet of a secret.
 */
enum GsStatus gs_graph_secret_alphabet(const struct GsGraphSecret *secret, char **out);

/**
 * A copy of the secret's graph on positions 0..c-1.
 */
enum GsStatus gs_graph_secret_graph(const struct GsGraphSecret *secret, struct GsGraph **out);

/**
 * Deals `n` shares with `b` padding nodes. Padding below the security
 * floor is refused unless `insecure` is set. Equal seeds give identical
 * shares.
 */
enum GsStatus gs_graph_deal(const struct GsGraphSecret *secret,
                            uint64_t n,
                            uint64_t b,
                            bool insecure,
                            uint64_t seed,
                            struct GsGraphShareList **out);

/**
 * Number of shares in a deal result; 0 for NULL.
 */
size_t gs_share_list_len(const struct GsGraphShareList *list);

/**
 * An independent handle to share `index` of a deal result.
 */
enum GsStatus gs_share_list_get(const struct GsGraphShareList *list,
                                size_t index,
                                struct GsGraphShare **out);

/**
 * Parses share text (the `.gshare` format) into a handle.
 */
enum GsStatus gs_graph_share_parse(const char *text, struct GsGraphShare **out);

/**
 * Serializes a share handle into `.gshare` text (audit data is never
 * included).
 */
enum GsStatus gs_graph_share_to_text(const struct GsGraphShare *share, char **out);

/**
 * Recovers the secret from two distinct shares of one deal.
 */
enum GsStatus gs_graph_reconstruct(const struct GsGraphShare *share_a,
                                   const struct GsGraphShare *share_b,
                                   struct GsGraphSecret **out);

/**
 * How many of the 2^C(c,2) candidate secrets one share leaves feasible.
 * `feasible_out` and `candidates_out` receive the counts; equality is the
 * perfect-secrecy check.
 */
enum GsStatus gs_share_feasible_candidates(const struct GsGraphShare *share,
                                           uint64_t cap,
                                           uint64_t *feasible_out,
                                           uint64_t *candidates_out);

/**
 * Number of strings in a list; 0 for NULL.
 */
size_t gs_string_list_len(const struct GsStringList *list);

/**
 * Borrowed pointer to string `index`; valid while the list is alive.
 */
const char *gs_string_list_get(const struct GsStringList *list, size_t index);

/**
 * Deals a (k, n) set scheme. `secret_lines` holds one token per line; the
 * result is one `.sshare` document per share.
 */
enum GsStatus gs_set_deal(const char *secret_lines,
                          uint64_t k,
                          uint64_t n,
                          uint64_t seed,
                          struct GsStringList **out);

/**
 * Intersects `.sshare` documents. Below the threshold the call fails with
 * `BelowThreshold` unless `force` is set; `below_threshold_out` reports
 * whether the result is a forced sub-threshold intersection. The result
 * holds one token per line, sorted bytewise.
 */
enum GsStatus gs_set_combine(const char *const *share_texts,
                             size_t count,
                             bool force,
                             bool *below_threshold_out,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHSHARE_H */
