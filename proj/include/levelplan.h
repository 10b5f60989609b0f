#ifndef LEVELPLAN_H
#define LEVELPLAN_H

/* C interface to the level-planarity library: parse level graphs, decide
 * planarity on the torus / rolling cylinder / standing cylinder, decide
 * two-graph simultaneous level planarity in the plane, generate hardness
 * instances from betweenness inputs, render witnesses, and run the built-in
 * cross-check corpus.
 *
 * All functions return lvp_status; on anything but LVP_OK the out-parameters
 * are untouched and lvp_last_error() carries a one-line description (thread
 * local, overwritten by the next failing call on the same thread). Strings
 * handed out through char** are heap copies owned by the caller; release
 * them with lvp_string_free. Handles are opaque and freed by their matching
 * *_free function; freeing NULL is allowed.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lvp_status {
  LVP_OK = 0,
  LVP_ERR_PARSE = 1,        /* malformed input text */
  LVP_ERR_PRECONDITION = 2, /* structurally unsupported input or bad call */
  LVP_ERR_BUDGET = 3,       /* an enumeration bound was exceeded */
  LVP_ERR_INTERNAL = 4
} lvp_status;

typedef enum lvp_surface {
  LVP_SURFACE_TORUS = 0,
  LVP_SURFACE_CYCLIC = 1, /* rolling cylinder: linear levels, cyclic layers */
  LVP_SURFACE_RADIAL = 2  /* standing cylinder: cyclic levels, linear layers */
} lvp_surface;

typedef enum lvp_gadget_family {
  LVP_GADGET_3X2 = 0, /* three graphs on two levels */
  LVP_GADGET_2X3 = 1  /* two graphs on three levels */
} lvp_gadget_family;

typedef struct lvp_graph lvp_graph;
typedef struct lvp_witness lvp_witness;
typedef struct lvp_betweenness lvp_betweenness;

const char* lvp_last_error(void);
void lvp_string_free(char* s);

/* Level graph text: "levels K", then "v NAME LEVEL" and "e FROM TO [GRAPH]"
 * lines; '#' starts a comment. The same format carries simultaneous
 * instances via the per-edge GRAPH tag. */
lvp_status lvp_graph_parse(const char* text, lvp_graph** out);
void lvp_graph_free(lvp_graph* g);
lvp_status lvp_graph_to_text(const lvp_graph* g, char** out);

/* planar: 1 = a crossing-free drawing exists, 0 = none exists. On a planar
 * verdict *out_witness (when non-NULL) receives the drawing. */
lvp_status lvp_test(const lvp_graph* g, lvp_surface surface, int* planar,
                    lvp_witness** out_witness);

/* Two graphs sharing two levels, drawn in the plane on common vertex
 * positions. The witness carries one linear order per level. */
lvp_status lvp_sim_test(const lvp_graph* g, int* planar,
                        lvp_witness** out_witness);

/* Same verdicts by exhaustive search instead of the solver. Intended for
 * cross-checking on small inputs; large ones fail with LVP_ERR_BUDGET. */
lvp_status lvp_oracle_test(const lvp_graph* g, lvp_surface surface,
                           int* planar);

void lvp_witness_free(lvp_witness* w);

/* "level I: v, w, ..." per level, in drawing order (circular orders start at
 * the lexicographically smallest vertex; cylinder and plane witnesses are
 * linear). Embedding witnesses add "layer I: u->v, ..." lines with the edge
 * rotation of every nonempty layer of the subdivided graph. */
lvp_status lvp_witness_text(const lvp_witness* w, char** out);

/* Schematic SVG of an embedding witness (unit square, identified sides).
 * Witnesses that carry only linear level orders have nothing to draw and
 * fail with LVP_ERR_PRECONDITION. */
lvp_status lvp_witness_svg(const lvp_witness* w, char** out);

/* Text dump of the ordering-constraint instance built for the torus test:
 * tree structures and arcs, for fixtures and debugging. */
lvp_status lvp_instance_dump(const lvp_graph* g, char** out);

/* Betweenness text: "elem NAME" lines, then "triplet A B C" lines. */
lvp_status lvp_betweenness_parse(const char* text, lvp_betweenness** out);
void lvp_betweenness_free(lvp_betweenness* b);

/* Builds the simultaneous-level-planarity instance whose planarity matches
 * the betweenness instance's satisfiability. */
lvp_status lvp_gen_gadget(const lvp_betweenness* b, lvp_gadget_family family,
                          lvp_graph** out);

/* Runs the built-in solver-vs-oracle corpus. *ok = 1 when every section
 * agreed; *report (when non-NULL) gets the per-section summary. */
lvp_status lvp_selfcheck(int* ok, char** report);

#ifdef __cplusplus
}
#endif

#endif /* LEVELPLAN_H */
