/* C interface of the rate-region kit (librrk).
 *
 * Every fallible call returns an rrk_status and reports details through
 * rrk_last_error(), which is per thread and stays valid until the next
 * failing call on that thread. Handles are opaque; each *_create / *_load /
 * producing call has a matching *_destroy that accepts NULL. Strings returned
 * by accessors are owned by the handle they came from.
 */
#ifndef RRK_H
#define RRK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RRK_BUILDING_LIBRARY)
#define RRK_API __declspec(dllexport)
#else
#define RRK_API __declspec(dllimport)
#endif
#else
#define RRK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes of the command-line tool. */
typedef enum rrk_status {
  RRK_OK = 0,
  RRK_CHECK_FAILED = 1, /* only ever reported through rrk_result_status */
  RRK_ERR_USAGE = 2,    /* bad argument or malformed input file */
  RRK_ERR_MODEL = 3,    /* distribution, channel or factorization problem */
  RRK_ERR_INCOMPATIBLE = 4,
  RRK_ERR_INTERNAL = 5
} rrk_status;

typedef struct rrk_options rrk_options;
typedef struct rrk_scenario rrk_scenario;
typedef struct rrk_result rrk_result;
typedef struct rrk_distribution rrk_distribution;
typedef struct rrk_constants rrk_constants;
typedef struct rrk_system rrk_system;

RRK_API const char* rrk_version(void);
RRK_API const char* rrk_last_error(void);
/* Position of the last parse error, 0 when unknown. */
RRK_API int rrk_last_error_line(void);
RRK_API int rrk_last_error_column(void);

/* ---- options ---------------------------------------------------------- */

RRK_API rrk_status rrk_options_create(rrk_options** out);
RRK_API void rrk_options_destroy(rrk_options* opt);
RRK_API rrk_status rrk_options_set_tol_polytope(rrk_options* opt, double tol);
RRK_API rrk_status rrk_options_set_tol_identity(rrk_options* opt, double tol);
RRK_API rrk_status rrk_options_set_seed(rrk_options* opt, uint64_t seed);
RRK_API rrk_status rrk_options_set_samples(rrk_options* opt, size_t samples);
RRK_API rrk_status rrk_options_set_threads(rrk_options* opt, unsigned threads);
/* Adds delta to the constant named label on the side under verification. */
RRK_API rrk_status rrk_options_add_perturbation(rrk_options* opt, const char* label, double delta);

/* ---- scenarios ---------------------------------------------------------- */

RRK_API rrk_status rrk_scenario_load(const char* path, rrk_scenario** out);
RRK_API rrk_status rrk_scenario_parse(const char* text, const char* name, rrk_scenario** out);
RRK_API void rrk_scenario_destroy(rrk_scenario* sc);
RRK_API const char* rrk_scenario_form(const rrk_scenario* sc);

/* ---- commands ------------------------------------------------------------
 * family may be NULL to use the scenario form's usual family. opt may be
 * NULL for defaults. On RRK_OK *out holds the artifacts. */

RRK_API rrk_status rrk_eval(const rrk_scenario* sc, const char* family, const rrk_options* opt, rrk_result** out);
RRK_API rrk_status rrk_project(const rrk_scenario* sc, const char* family, const rrk_options* opt,
                               rrk_result** out);
RRK_API rrk_status rrk_compare(const rrk_scenario* a, const char* family_a, const rrk_scenario* b,
                               const char* family_b, int project, const rrk_options* opt, rrk_result** out);
RRK_API rrk_status rrk_verify(const char* check, const rrk_options* opt, rrk_result** out);
RRK_API rrk_status rrk_union(const rrk_scenario* sc, const char* family, const rrk_options* opt, rrk_result** out);
RRK_API rrk_status rrk_plot(const char* const* names, const char* const* contents, size_t count, rrk_result** out);

RRK_API size_t rrk_check_count(void);
RRK_API const char* rrk_check_name(size_t index);

/* 0 on success, 1 when a verification failed. */
RRK_API int rrk_result_status(const rrk_result* r);
/* Artifact text, "" when the command does not produce it. */
RRK_API const char* rrk_result_json(const rrk_result* r);
RRK_API const char* rrk_result_csv(const rrk_result* r);
RRK_API const char* rrk_result_svg(const rrk_result* r);
RRK_API const char* rrk_result_text(const rrk_result* r);
RRK_API void rrk_result_destroy(rrk_result* r);

/* ---- distributions, constants and systems ------------------------------- */

RRK_API rrk_status rrk_scenario_distribution(const rrk_scenario* sc, size_t index, uint64_t seed,
                                             rrk_distribution** out);
RRK_API void rrk_distribution_destroy(rrk_distribution* d);
/* Evaluates an information expression such as "I(Y1;U1|QW1W2) - H(X1)". */
RRK_API rrk_status rrk_info(const rrk_distribution* d, const char* expr, double* bits);

RRK_API rrk_status rrk_constants_evaluate(const rrk_distribution* d, const char* family, rrk_constants** out);
RRK_API void rrk_constants_destroy(rrk_constants* c);
RRK_API size_t rrk_constants_count(const rrk_constants* c);
RRK_API const char* rrk_constants_label(const rrk_constants* c, size_t index);
RRK_API double rrk_constants_value(const rrk_constants* c, size_t index);
RRK_API rrk_status rrk_constants_set(rrk_constants* c, const char* label, double value);

/* kind: thm3, thm4, thm5, thm6, dmt, rtd or list37. */
RRK_API rrk_status rrk_system_build(const rrk_constants* c, const char* kind, rrk_system** out);
RRK_API rrk_status rrk_system_project(const rrk_system* sys, rrk_system** out);
RRK_API rrk_status rrk_system_reduce(const rrk_system* sys, double tol, rrk_system** out);
RRK_API rrk_status rrk_system_contains(const rrk_system* outer, const rrk_system* inner, double tol, int* holds);
RRK_API size_t rrk_system_rows(const rrk_system* sys);
RRK_API size_t rrk_system_dimension(const rrk_system* sys);
/* Writes up to capacity (r1, r2) pairs into xy; *count gets the vertex count. */
RRK_API rrk_status rrk_system_vertices(const rrk_system* sys, double tol, double* xy, size_t capacity,
                                       size_t* count);
RRK_API const char* rrk_system_json(const rrk_system* sys);
RRK_API void rrk_system_destroy(rrk_system* sys);

#ifdef __cplusplus
}
#endif

#endif /* RRK_H */
