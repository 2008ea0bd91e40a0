#ifndef CLARR_CLARR_H
#define CLARR_CLARR_H

#include <stddef.h>

#if defined(_WIN32)
#define CLARR_API __declspec(dllexport)
#else
#define CLARR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes double as CLI exit codes. */
typedef enum clarr_status {
    CLARR_OK = 0,
    CLARR_VERIFY_FAILED = 1,
    CLARR_INPUT_ERROR = 2,
    CLARR_INTERNAL_ERROR = 3
} clarr_status;

typedef struct clarr_arrangement clarr_arrangement;

CLARR_API const char* clarr_version(void);

/* Error of the last failing call on this thread as JSON
   {"error": {"kind", "class", "message"}}; "" when none. Valid until the
   next call on the same thread. */
CLARR_API const char* clarr_last_error(void);
CLARR_API void clarr_clear_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
CLARR_API void clarr_string_free(char* s);

CLARR_API clarr_status clarr_catalog_json(char** out);

/* Canonical basepoint of cmb, with optional overrides: params_json is
   {"lambda", "t"}, choices_json a list of {label, spec} or an object
   {label: spec}. Either may be NULL. */
CLARR_API clarr_status clarr_construct(const char* cmb, const char* params_json, const char* choices_json,
                                       clarr_arrangement** out);
/* C_o1 + C_o2,beta + L13 + L_bk + L_bl. */
CLARR_API clarr_status clarr_construct_beta(const char* beta, int k, int l, clarr_arrangement** out);
CLARR_API clarr_status clarr_arrangement_from_json(const char* json, clarr_arrangement** out);
CLARR_API void clarr_arrangement_free(clarr_arrangement* a);

CLARR_API clarr_status clarr_arrangement_to_json(const clarr_arrangement* a, char** out);
CLARR_API clarr_status clarr_arrangement_svg(const clarr_arrangement* a, double tmin, double tmax, double xmin,
                                             double xmax, char** out);
CLARR_API size_t clarr_arrangement_size(const clarr_arrangement* a);

/* Canonical combinatorics JSON. */
CLARR_API clarr_status clarr_classify(const clarr_arrangement* a, char** out);
/* Compares against the golden combinatorics of cmb (the arrangement's own id
   when NULL). CLARR_VERIFY_FAILED with a diff in the report when they differ. */
CLARR_API clarr_status clarr_verify(const clarr_arrangement* a, const char* cmb, char** report);

/* Certificate JSON; the verdict is in the document, so CLARR_OK is returned
   whatever it is. */
CLARR_API clarr_status clarr_certificate(const clarr_arrangement* a, const clarr_arrangement* b, int splitting,
                                         int dihedral, long prime, char** out);

/* Path spec JSON in, report JSON out. samples > 0 overrides
   samples_per_segment. CLARR_VERIFY_FAILED when a degeneration is found. */
CLARR_API clarr_status clarr_deform(const char* path_json, int samples, char** report);

/* Canonical literal of a tower element. */
CLARR_API clarr_status clarr_parse_elem(const char* literal, char** out);

#ifdef __cplusplus
}
#endif

#endif
