/* C interface to the fslice slicer. Strings returned through `char**` are
   owned by the caller and released with fslice_string_free. */
#ifndef FSLICE_FSLICE_H
#define FSLICE_FSLICE_H

#include <stddef.h>

#if defined(FSLICE_BUILDING_LIBRARY)
#define FSLICE_API __attribute__((visibility("default")))
#else
#define FSLICE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FSLICE_OK = 0,
  FSLICE_USAGE = 1,     /* bad arguments */
  FSLICE_ANALYSIS = 2,  /* parse, validation, analysis, runtime or I/O failure */
  FSLICE_MISMATCH = 3   /* artifact belongs to a different program */
} fslice_status;

typedef struct fslice_program fslice_program;
typedef struct fslice_artifact fslice_artifact;

enum {
  FSLICE_PARSE_HIGHER_ORDER = 1,
  FSLICE_PARSE_ALLOW_HOLES = 2,
  FSLICE_PARSE_NO_VALIDATE = 4
};

FSLICE_API const char* fslice_version(void);

/* Message and kind ("syntax", "mismatch", ...) of the last failure on this thread. */
FSLICE_API const char* fslice_last_error(void);
FSLICE_API const char* fslice_last_error_kind(void);
FSLICE_API void fslice_string_free(char* s);

FSLICE_API fslice_status fslice_program_parse(const char* text, int flags, fslice_program** out);
FSLICE_API fslice_status fslice_program_load(const char* path, int flags, fslice_program** out);
FSLICE_API void fslice_program_free(fslice_program* p);
FSLICE_API fslice_status fslice_program_print(const fslice_program* p, int show_labels, char** out);
/* JSON array of {"code", "message"}. */
FSLICE_API fslice_status fslice_program_validate(const fslice_program* p, char** out_json);
FSLICE_API fslice_status fslice_program_fingerprint(const fslice_program* p, char** out);
FSLICE_API int fslice_program_is_first_order(const fslice_program* p);

/* First-order version of a higher-order program. */
FSLICE_API fslice_status fslice_firstify(const fslice_program* ho, fslice_program** out);

typedef struct {
  const char* criterion;            /* e.g. "eps + 0" */
  int strict;                       /* reject criteria that are not prefix-closed */
  int incremental;                  /* answer from an artifact instead of the demand analysis */
  int firstify;                     /* slice the firstified program and map the result back */
  unsigned threads;                 /* 0: hardware concurrency */
  const fslice_artifact* artifact;  /* incremental mode; NULL precomputes in-process */
} fslice_slice_options;

FSLICE_API void fslice_slice_options_init(fslice_slice_options* o);

/* Residual program text and a JSON report
   {"criterion", "mode", "labels_total", "labels_kept", "per_label": {"piN": bool}}.
   Either output may be NULL. */
FSLICE_API fslice_status fslice_slice(const fslice_program* p, const fslice_slice_options* o, char** out_residual,
                                      char** out_report);

/* Precompute runs on the firstified program when `firstify` is set. */
FSLICE_API fslice_status fslice_precompute(const fslice_program* p, int firstify, unsigned threads,
                                           fslice_artifact** out);
FSLICE_API void fslice_artifact_free(fslice_artifact* a);
FSLICE_API fslice_status fslice_artifact_save(const fslice_artifact* a, char** out_json);
FSLICE_API fslice_status fslice_artifact_write(const fslice_artifact* a, const char* path);
FSLICE_API fslice_status fslice_artifact_parse(const char* json, fslice_artifact** out);
FSLICE_API fslice_status fslice_artifact_load(const char* path, fslice_artifact** out);
/* FSLICE_MISMATCH when the artifact was computed for another program. */
FSLICE_API fslice_status fslice_artifact_check(const fslice_artifact* a, const fslice_program* p, int firstify);

/* JSON object {"piN": bool}; all labels when `labels` is NULL or `n` is 0. */
FSLICE_API fslice_status fslice_query(const fslice_artifact* a, const char* criterion, int strict,
                                      const char* const* labels, size_t n, char** out_json);

/* Rendered result value; with `trace` set, one line per transition in out_trace. */
FSLICE_API fslice_status fslice_run(const fslice_program* p, unsigned long long fuel, int trace, char** out_value,
                                    char** out_trace);

/* Grammar for the program; with a criterion, instantiated for it. */
FSLICE_API fslice_status fslice_dump_grammar(const fslice_program* p, const char* criterion, char** out);
/* Demand automaton at `label` for `criterion`, in the artifact automaton schema. */
FSLICE_API fslice_status fslice_dump_automaton(const fslice_program* p, const char* criterion, const char* label,
                                               char** out_json);

/* Benchmarks every .fsl in `dir`. Either output may be NULL. */
FSLICE_API fslice_status fslice_bench(const char* dir, const char* const* criteria, size_t n, unsigned runs,
                                      char** out_table, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
