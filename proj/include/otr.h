/* C interface to the open topological recursion engine. */
#ifndef OTR_H
#define OTR_H

#include <stddef.h>

#if defined(OTR_BUILDING_LIBRARY)
#define OTR_API __attribute__((visibility("default")))
#else
#define OTR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct otr_engine otr_engine;

typedef enum {
  OTR_OK = 0,
  OTR_VERIFICATION_FAILED = 1,
  OTR_CONTRACT_ERROR = 2,
  OTR_IO_ERROR = 3,
  OTR_INTERNAL_ERROR = 4
} otr_status;

typedef enum { OTR_FORMAT_TEXT = 0, OTR_FORMAT_JSON = 1, OTR_FORMAT_CSV = 2 } otr_format;

typedef struct {
  int budget;            /* max 4g + n */
  int t_degree;          /* master-equation truncation, 0 = derived */
  const char* cache_dir; /* NULL or "" = $OTR_CACHE_DIR, else no cache */
  otr_format format;
  const char* q_mode;    /* NULL, "off", "symbolic" or "p/q" */
  int hbar_order;
  int threads;
} otr_config;

/* Defaults: budget 8, hbar order 2, one thread, text output, Q off. */
OTR_API void otr_config_init(otr_config* config);

OTR_API otr_status otr_engine_create(const otr_config* config, otr_engine** out);
OTR_API void otr_engine_destroy(otr_engine* engine);

/* Message of the last failure on this engine, or of the last failed create when engine is NULL. */
OTR_API const char* otr_engine_last_error(const otr_engine* engine);

/* Strings returned through `out` are owned by the caller; release with otr_string_free. */
OTR_API otr_status otr_correlator(otr_engine* engine, const char* genus, int n, int allow_unstable, char** out);
/* Returns OTR_VERIFICATION_FAILED with the report in `out` when the suite fails. */
OTR_API otr_status otr_check(otr_engine* engine, const char* suite, char** out);
OTR_API otr_status otr_table(otr_engine* engine, char** out);
/* what: "correlators", "table", "q-correlators" or "q-symmetry". */
OTR_API otr_status otr_export(otr_engine* engine, const char* what, char** out);

OTR_API void otr_string_free(char* s);
OTR_API const char* otr_status_string(otr_status status);
OTR_API const char* otr_version(void);

#ifdef __cplusplus
}
#endif

#endif
