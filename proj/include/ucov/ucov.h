#ifndef UCOV_UCOV_H
#define UCOV_UCOV_H

/* C interface to the uniform covering toolkit. Objects are opaque handles;
 * every call returns a status code and, on failure, leaves a message in
 * ucov_last_error() (per thread). Strings returned through char** are owned
 * by the caller and released with ucov_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#define UCOV_API __declspec(dllexport)
#else
#define UCOV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ucov_space ucov_space;
typedef struct ucov_map ucov_map;

typedef enum {
  UCOV_OK = 0,
  UCOV_ERR_IO = 1,
  UCOV_ERR_PARSE = 2,
  UCOV_ERR_VALIDATION = 3,
  UCOV_ERR_CERTIFICATE = 4,
  UCOV_ERR_ARGUMENT = 5,
  UCOV_ERR_INTERNAL = 6
} ucov_status;

typedef enum { UCOV_YES = 0, UCOV_NO = 1, UCOV_UNKNOWN = 2 } ucov_verdict;

typedef struct {
  size_t max_states;   /* homotopy search: expanded states */
  size_t max_length;   /* homotopy search: chain length cap, 0 = 4n */
  long class_norm;     /* witness search: max-norm of class vectors */
  size_t c2_max_links; /* c2 refutation search: chain length in links */
  size_t c2_max_pairs; /* c2 refutation search: chain pairs examined */
  unsigned threads;    /* 0 = hardware concurrency */
  int strict;          /* nonzero: d < eps instead of d <= eps */
} ucov_options;

UCOV_API const char* ucov_last_error(void);
UCOV_API void ucov_string_free(char* s);
UCOV_API void ucov_options_default(ucov_options* opts);

/* format: "json", "csv-matrix", "csv-points" or NULL to guess from the name */
UCOV_API ucov_status ucov_space_load(const char* path, const char* format, ucov_space** out);
/* spec: "polygon:12,1", "hexagon_ex72", "solenoid:2,64,4,1", ... */
UCOV_API ucov_status ucov_space_gallery(const char* spec, ucov_space** out);
UCOV_API ucov_status ucov_space_from_json(const char* json, ucov_space** out);
UCOV_API void ucov_space_free(ucov_space* space);
UCOV_API size_t ucov_space_size(const ucov_space* space);
UCOV_API ucov_status ucov_space_to_json(const ucov_space* space, char** json_out);
UCOV_API ucov_status ucov_space_index(const ucov_space* space, const char* label_or_index, size_t* out);
/* Writes up to cap thresholds; *count receives the full length. */
UCOV_API ucov_status ucov_space_recommended_ladder(const ucov_space* space, double* out, size_t cap, size_t* count);

/* H1 tower along a strictly decreasing ladder. text_out (nullable) gets a
 * table. When g_scale > 0 the report also carries G(E) at that scale, and
 * when audit is nonzero a uniform joinability audit. */
UCOV_API ucov_status ucov_analyze(const ucov_space* space, const double* ladder, size_t ladder_len, size_t basepoint,
                                  double g_scale, int audit, const ucov_options* opts, char** json_out,
                                  char** text_out);

UCOV_API ucov_status ucov_map_load(const char* path, ucov_map** out);
UCOV_API ucov_status ucov_map_from_json(const char* json, ucov_map** out);
UCOV_API void ucov_map_free(ucov_map* map);
/* Ladder stored with the map, else the source's recommended ladder. */
UCOV_API ucov_status ucov_map_ladder(const ucov_map* map, double* out, size_t cap, size_t* count);
UCOV_API ucov_status ucov_cover(const ucov_map* map, const double* ladder, size_t ladder_len, const ucov_options* opts,
                                int* verdict, char** json_out);

UCOV_API ucov_status ucov_join(const ucov_space* space, size_t x, size_t y, double target, double fine,
                               const ucov_options* opts, int* verdict, char** json_out);
UCOV_API ucov_status ucov_short(const ucov_space* space, const size_t* chain, size_t len, double scale,
                                const ucov_options* opts, int* verdict, char** json_out);
UCOV_API ucov_status ucov_homotopic(const ucov_space* space, const size_t* c, size_t c_len, const size_t* d,
                                    size_t d_len, double scale, const ucov_options* opts, int* verdict,
                                    char** json_out);
/* *ok is 1 when the certificate replays; a malformed certificate returns
 * UCOV_ERR_PARSE or UCOV_ERR_VALIDATION. */
UCOV_API ucov_status ucov_replay(const char* certificate_json, int* ok, char** json_out);

UCOV_API ucov_status ucov_ball(const ucov_space* space, double scale, size_t basepoint, size_t radius,
                               const ucov_options* opts, char** json_out, char** dot_out);

#ifdef __cplusplus
}
#endif

#endif
