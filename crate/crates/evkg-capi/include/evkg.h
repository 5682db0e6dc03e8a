/* C interface to the eventuality knowledge graph toolkit. */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum EvkgStatus {
  EvkgStatus_Ok = 0,
  EvkgStatus_NullArgument = 1,
  EvkgStatus_InvalidUtf8 = 2,
  EvkgStatus_LoadFailed = 3,
  EvkgStatus_UnknownEventuality = 4,
  EvkgStatus_AmbiguousWords = 5,
  EvkgStatus_InvalidRelation = 6,
  EvkgStatus_InvalidQuery = 7,
  EvkgStatus_Internal = 8,
} EvkgStatus;

/**
 * Opaque handle to a loaded graph.
 */
typedef struct EvkgGraph EvkgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *evkg_last_error(void);

/**
 * Loads a graph from a directory holding `eventualities.jsonl` and
 * `relations.jsonl`.
 */
enum EvkgStatus evkg_graph_load(const char *dir, struct EvkgGraph **out);

/**
 * Releases a graph handle. Null is a no-op.
 */
void evkg_graph_free(struct EvkgGraph *graph);

/**
 * Releases a string returned by this library. Null is a no-op.
 */
void evkg_string_free(char *s);

/**
 * Number of eventualities in the graph (0 for a null handle).
 */
uint64_t evkg_graph_eventuality_count(const struct EvkgGraph *graph);

/**
 * Number of directed eventuality pairs carrying at least one relation.
 */
uint64_t evkg_graph_edge_count(const struct EvkgGraph *graph);

/**
 * Finds the keys of eventualities whose word sequence equals `words`
 * (space-separated); writes a JSON array of keys.
 */
enum EvkgStatus evkg_match_keys(const struct EvkgGraph *graph, const char *words, char **out_json);

/**
 * Ranked eventuality retrieval along a one- or two-relation path.
 * `event` is a space-separated word sequence or a full canonical key;
 * `relations` is one or two comma-separated type names. A nonzero
 * `reverse` ranks heads that reach the event instead of tails.
 * Writes the same JSON document the CLI prints.
 */
enum EvkgStatus evkg_query_tails(const struct EvkgGraph *graph,
                                 const char *event,
                                 const char *relations,
                                 uintptr_t topk,
                                 bool reverse,
                                 char **out_json);

/**
 * Relation probabilities between two eventualities. With a null
 * `relations`, writes the full one-hop distribution; with one name, that
 * relation's probability; with two, the two-hop path probability and its
 * supporting intermediates.
 */
enum EvkgStatus evkg_query_relations(const struct EvkgGraph *graph,
                                     const char *head,
                                     const char *tail,
                                     const char *relations,
                                     bool include_co_occurrence,
                                     char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
