#ifndef RAYCENSUS_RAYCENSUS_H
#define RAYCENSUS_RAYCENSUS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef RAYCENSUS_BUILDING
#    define RC_API __declspec(dllexport)
#  else
#    define RC_API __declspec(dllimport)
#  endif
#else
#  define RC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_INVALID_ARGUMENT = 1,
  RC_PARSE_ERROR = 2,
  RC_SINGULAR_HIT = 3,
  RC_ON_ARC = 4,
  RC_PRECONDITION = 5,
  RC_NUMERIC = 6,
  RC_ESCAPED = 7,   /* evaluation overflowed: the point escaped */
  RC_INTERNAL = 8
} rc_status;

typedef struct rc_complex {
  double re;
  double im;
} rc_complex;

typedef struct rc_map rc_map;
typedef struct rc_graph rc_graph;

typedef enum rc_landing_status {
  RC_LANDED = 0,
  RC_NOT_CONVERGED = 1,
  RC_ESCAPED_PULLBACK = 2,
  RC_LANDING_SINGULAR_HIT = 3
} rc_landing_status;

typedef struct rc_landing {
  rc_landing_status status;
  rc_complex point;
  rc_complex psi_derivative;
  int iterations;
} rc_landing;

RC_API const char* rc_version(void);

/* Message for the last failing call on this thread; never NULL. */
RC_API const char* rc_last_error(void);

/* radius <= 0 selects the default radius. */
RC_API rc_status rc_map_create(rc_complex c, double radius, rc_map** out);
RC_API void rc_map_destroy(rc_map* map);
RC_API rc_status rc_map_radius(const rc_map* map, double* out);

RC_API rc_status rc_evaluate(const rc_map* map, rc_complex z, rc_complex* out);
RC_API rc_status rc_inverse_branch(const rc_map* map, rc_complex w, int64_t label,
                                   rc_complex* out, int* on_cut);
/* *has_label is 0 outside the tract. */
RC_API rc_status rc_fundamental_domain(const rc_map* map, rc_complex z, int* has_label,
                                       int64_t* label);

/* Writes the canonical spelling of an address into buf (NUL terminated).
 * *needed receives the required size including the terminator. */
RC_API rc_status rc_address_canonical(const char* text, char* buf, size_t size, size_t* needed);

RC_API rc_status rc_landing_point(const rc_map* map, const char* address, double tol,
                                  int max_iter, rc_landing* out);

RC_API rc_status rc_graph_build(const rc_map* map, int p, int window, int depth,
                                const double box[4], int probe_grid, rc_graph** out);
RC_API void rc_graph_destroy(rc_graph* graph);
RC_API rc_status rc_graph_arc_count(const rc_graph* graph, size_t* out);
RC_API rc_status rc_graph_region_of(const rc_graph* graph, rc_complex z, uint64_t* region);

/* Runs a JSON request (see README). *out is allocated and must be released
 * with rc_free; *exit_code follows the CLI exit-code table. */
RC_API rc_status rc_run(const char* request_json, char** out, char** diagnostics,
                        int* exit_code);
RC_API void rc_free(void* p);

#ifdef __cplusplus
}
#endif

#endif
