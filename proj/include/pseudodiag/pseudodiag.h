/* C interface to libpseudodiag.
 *
 * Every function returns a pd_status. On failure, pd_last_error() describes
 * the most recent error on the calling thread. Strings handed out by the
 * library are NUL-terminated UTF-8 and must be released with pd_string_free.
 */
#ifndef PSEUDODIAG_H
#define PSEUDODIAG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PD_API __declspec(dllexport)
#else
#define PD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pd_status {
  PD_OK = 0,
  PD_ERR_INVALID_ARGUMENT = 1,
  PD_ERR_SYNTAX = 2,         /* malformed input text (code, TSV, JSON, SVG) */
  PD_ERR_INVALID_GRAPH = 3,
  PD_ERR_NOT_FOUND = 4,      /* unknown node id or arrow index */
  PD_ERR_IO = 5,
  PD_ERR_EMPTY = 6,          /* empty document, too few nodes or elements */
  PD_ERR_GENERATION = 7,     /* hard sample could not be generated */
  PD_ERR_NUMERIC = 8,        /* loss input out of domain */
  PD_ERR_UNSUPPORTED = 9,
  PD_ERR_INTERNAL = 10
} pd_status;

typedef struct pd_graph pd_graph;
typedef struct pd_config pd_config;

typedef struct pd_run_result {
  int exit_code; /* 0 ok, 1 usage, 2 empty output, 3 I/O, 4 check failed */
  size_t records;
  size_t failures;
} pd_run_result;

typedef void (*pd_log_fn)(const char* line, void* user);

PD_API const char* pd_version(void);
PD_API const char* pd_last_error(void);
/* Symbolic name of the last error (e.g. "UnknownNodeReference"), "" if none. */
PD_API const char* pd_last_error_code(void);
/* 1-based position of the last parse error; 0 when not applicable. */
PD_API void pd_last_error_position(size_t* line, size_t* column);
PD_API void pd_string_free(char* s);

/* Diagram code (flowchart subset). */
PD_API pd_status pd_graph_parse(const char* code, size_t len, pd_graph** out);
PD_API void pd_graph_free(pd_graph* g);
PD_API pd_status pd_graph_node_count(const pd_graph* g, size_t* out);
PD_API pd_status pd_graph_edge_count(const pd_graph* g, size_t* out);
PD_API pd_status pd_graph_emit_code(const pd_graph* g, char** out);
PD_API pd_status pd_graph_describe(const pd_graph* g, char** out);
PD_API pd_status pd_graph_render_svg(const pd_graph* g, char** out);
PD_API pd_status pd_graph_is_isomorphic(const pd_graph* a, const pd_graph* b, int* out);

/* Caption of an OCR file (.tsv or .json) after word grouping. */
PD_API pd_status pd_crop_caption_file(const char* path, double y_tolerance, char** out);

/* Pipeline configuration. mode: "pseudo", "gran", "crop-captions", "loss-fixtures". */
PD_API pd_status pd_config_new(pd_config** out);
PD_API void pd_config_free(pd_config* c);
PD_API pd_status pd_config_set_mode(pd_config* c, const char* mode);
PD_API pd_status pd_config_add_input(pd_config* c, const char* path);
PD_API pd_status pd_config_set_output(pd_config* c, const char* dir);
PD_API pd_status pd_config_set_seed(pd_config* c, uint64_t seed);
/* Unsigned settings: "node-size", "sampling-size", "max-diagrams", "pos-images",
 * "pos-captions", "neg-images", "neg-captions", "jobs", "max-records",
 * "batch-size", "feature-dim". */
PD_API pd_status pd_config_set_size(pd_config* c, const char* name, size_t value);
/* Real settings: "lambda-sc", "temperature", "y-tolerance", "move-range". */
PD_API pd_status pd_config_set_real(pd_config* c, const char* name, double value);
/* Emit flags: "svg", "codes", "captions", "hard-sets". */
PD_API pd_status pd_config_set_emit(pd_config* c, const char* what, int enabled);
/* Log lines go to standard error unless a callback is set. */
PD_API pd_status pd_config_set_log(pd_config* c, pd_log_fn fn, void* user);

/* Runs the configured mode. Returns PD_OK whenever the run itself could be
 * attempted; the outcome is in result->exit_code. */
PD_API pd_status pd_run(const pd_config* c, pd_run_result* result);

#ifdef __cplusplus
}
#endif

#endif
