#ifndef EHZ_EHZ_H
#define EHZ_EHZ_H

/*
 * C interface to the capacity library. Handles are opaque; every fallible call
 * returns an ehz_status and, on failure, leaves a message retrievable through
 * ehz_last_error() on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with ehz_string_free().
 * Curves cross the boundary as JSON text {"points": [[...], ...]}.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EHZ_API __declspec(dllexport)
#else
#define EHZ_API __attribute__((visibility("default")))
#endif

typedef enum ehz_status {
  EHZ_OK = 0,
  EHZ_ERR_INVALID_ARGUMENT = 1,
  EHZ_ERR_PARSE = 2,
  EHZ_ERR_INVALID_BODY = 3,
  EHZ_ERR_DIMENSION_MISMATCH = 4,
  EHZ_ERR_ORIGIN_NOT_INTERIOR = 5,
  EHZ_ERR_POINT_OUTSIDE_BODY = 6,
  EHZ_ERR_CURVE_COLLAPSES = 7,
  EHZ_ERR_LENGTH_MISMATCH = 8,
  EHZ_ERR_NO_VALID_SUBSELECTION = 9,
  EHZ_ERR_NOT_A_BILLIARD = 10,
  EHZ_ERR_POINT_OFF_BOUNDARY = 11,
  EHZ_ERR_GRID_TOO_COARSE = 12,
  EHZ_ERR_NUMERICAL = 13,
  EHZ_ERR_IDENTITY_CHECK = 14,
  EHZ_ERR_INTERNAL = 99
} ehz_status;

typedef struct ehz_body ehz_body;
typedef struct ehz_result ehz_result;

typedef struct ehz_options {
  size_t m_max;        /* 0: n + 1 */
  double tol;          /* membership and cone tolerance */
  double oracle_step;  /* > 0 also runs the grid oracle */
  int symmetric;       /* nonzero: cross-compute min over F(T) of l_K */
  int billiard;        /* nonzero: certify a billiard of optimal length */
  unsigned threads;    /* 0: hardware concurrency */
} ehz_options;

EHZ_API const char* ehz_last_error(void);
EHZ_API const char* ehz_status_name(ehz_status status);
EHZ_API void ehz_string_free(char* s);
EHZ_API void ehz_options_default(ehz_options* options);

/* Bodies */
EHZ_API ehz_status ehz_body_from_json(const char* json, ehz_body** out);
EHZ_API ehz_status ehz_body_named(const char* name, ehz_body** out);
EHZ_API ehz_status ehz_body_random_polygon(int k, uint64_t seed, ehz_body** out);
EHZ_API ehz_status ehz_body_random_polytope(int dim, int k, uint64_t seed, ehz_body** out);
EHZ_API ehz_status ehz_body_perturbed(const ehz_body* base, double delta, uint64_t seed, ehz_body** out);
EHZ_API ehz_status ehz_body_to_json(const ehz_body* body, char** out);
EHZ_API int ehz_body_dim(const ehz_body* body);
EHZ_API double ehz_hausdorff(const ehz_body* a, const ehz_body* b);
EHZ_API void ehz_body_free(ehz_body* body);

/* Capacity */
EHZ_API ehz_status ehz_capacity(const ehz_body* K, const ehz_body* T, const ehz_options* options, ehz_result** out);
EHZ_API double ehz_result_value(const ehz_result* result);
EHZ_API int ehz_result_identities_ok(const ehz_result* result);
EHZ_API int ehz_result_has_billiard(const ehz_result* result);
EHZ_API ehz_status ehz_result_to_json(const ehz_result* result, char** out);
EHZ_API void ehz_result_free(ehz_result* result);

EHZ_API ehz_status ehz_oracle(const ehz_body* K, const ehz_body* T, double step, size_t m_max, double* out);
EHZ_API ehz_status ehz_identities(const ehz_body* K, const ehz_body* T, size_t m_max, char** out_json);

/* Curves and billiards; q_json / p_json are curve JSON documents. */
EHZ_API ehz_status ehz_length(const ehz_body* T, const char* q_json, double* out);
EHZ_API ehz_status ehz_fcp_check(const ehz_body* K, const char* q_json, double tol, char** out_json, int* in_F);
EHZ_API ehz_status ehz_reduce(const ehz_body* K, const ehz_body* T, const char* q_json, double tol, char** out_json);
EHZ_API ehz_status ehz_extract_dual(const ehz_body* K, const ehz_body* T, const char* q_json, double tol,
                                    char** out_json);
EHZ_API ehz_status ehz_verify_strong(const ehz_body* K, const ehz_body* T, const char* q_json, const char* p_json,
                                     double tol, char** out_json, int* passed);
EHZ_API ehz_status ehz_verify_weak(const ehz_body* K, const ehz_body* T, const char* q_json, double tol,
                                   char** out_json, int* passed);

/* Studies; CSV text. */
EHZ_API ehz_status ehz_study_continuity(const ehz_body* base, const ehz_body* T, const double* deltas,
                                        size_t num_deltas, uint64_t seed, int samples, char** out_csv);
EHZ_API ehz_status ehz_study_symmetry(const ehz_body* const* tables, const ehz_body* const* lengths, size_t count,
                                      char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* EHZ_EHZ_H */
