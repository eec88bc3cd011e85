/* C interface to the linkmod library.
 *
 * All functions that produce output return it as a heap-allocated JSON (or
 * SVG) string through an out-parameter; release it with linkmod_string_free.
 * On any failure the return code is nonzero and linkmod_last_error() gives a
 * message describing the most recent failure on the calling thread.
 */
#ifndef LINKMOD_H
#define LINKMOD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LINKMOD_OK = 0,
  LINKMOD_ERR_PARSE = 1,            /* malformed JSON or bad field types */
  LINKMOD_ERR_INVALID_ARGUMENT = 2, /* arguments outside the domain */
  LINKMOD_ERR_UNSUPPORTED = 3,      /* spec shape outside the method */
  LINKMOD_ERR_RUNTIME = 4           /* internal failure */
} linkmod_status;

/* Opaque parsed form of the spec file { "chains": [[lengths...], ...] }.
 * Lengths may be JSON numbers, or strings like "5/2" to enable the exact
 * classification mode. */
typedef struct linkmod_spec linkmod_spec;

linkmod_status linkmod_spec_parse(const char* json, linkmod_spec** out);
void linkmod_spec_free(linkmod_spec* spec);

/* Symbolic multiquadrilateral classification. With exact_mode nonzero, all
 * lengths must have been given as fraction strings and the case analysis is
 * carried out in rational arithmetic. The result JSON carries the
 * classification object plus a "summary" line. */
linkmod_status linkmod_classify(const linkmod_spec* spec, int exact_mode,
                                char** out_json);

/* Smoothness certificates plus the minimum numeric Jacobian rank observed
 * over `samples` seeded on-variety configurations (0 samples skips the
 * numeric part). `tol` is the relative singular-value cutoff. */
linkmod_status linkmod_smoothness(const linkmod_spec* spec, int samples,
                                  double tol, uint64_t seed, char** out_json);

/* Interval decomposition of the vertex-angle projection and the total Euler
 * characteristic; includes the product certificate when one applies. */
linkmod_status linkmod_euler(const linkmod_spec* spec, char** out_json);

/* Fiber descriptor over one vertex angle (radians). */
linkmod_status linkmod_fiber_at(const linkmod_spec* spec, double angle,
                                char** out_json);

/* Schematic of the degenerate angles on the circle with per-interval fiber
 * labels, as an SVG document. */
linkmod_status linkmod_euler_svg(const linkmod_spec* spec, char** out_svg);

/* Deform chain `chain_index` from the angles in config_json (file format
 * { "angles": [[radians...], ...] }) to the target end-to-end distance. */
linkmod_status linkmod_path(const linkmod_spec* spec, int chain_index,
                            const char* config_json, double target_distance,
                            char** out_json);

/* Connectedness certificate for the whole moduli space, plus the
 * Kapovich-Millson disconnection test on each two-chain polygon. */
linkmod_status linkmod_connected(const linkmod_spec* spec, char** out_json);

/* Deterministic sample of the closure variety: points, radius-graph edges
 * and component labels. */
linkmod_status linkmod_sample(const linkmod_spec* spec, int n_samples,
                              uint64_t seed, char** out_json);

/* Message for the most recent error on this thread; empty string if none. */
const char* linkmod_last_error(void);

void linkmod_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LINKMOD_H */
