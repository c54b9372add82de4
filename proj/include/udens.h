/* udens - certified upper bounds on the density of planar sets avoiding unit
 * distance.
 *
 * C interface to the solver library: opaque handles, integer status codes,
 * and JSON/CSV strings for structured data. Strings returned through char**
 * are heap-allocated and must be released with udens_string_free(). All
 * functions return a udens_status; on failure udens_last_error() carries a
 * human-readable message for the calling thread.
 */

#ifndef UDENS_H
#define UDENS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define UDENS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define UDENS_API __attribute__((visibility("default")))
#else
#define UDENS_API
#endif

typedef enum udens_status {
    UDENS_OK = 0,
    UDENS_ERR_INVALID_ARGUMENT = 1,
    UDENS_ERR_PARSE = 2,
    UDENS_ERR_RANGE = 3,
    UDENS_ERR_LP = 4,
    UDENS_ERR_VERIFY = 5,
    UDENS_ERR_IO = 6,
    UDENS_ERR_INTERNAL = 7
} udens_status;

UDENS_API const char* udens_status_name(int status);

/* Message describing the most recent failure on this thread. */
UDENS_API const char* udens_last_error(void);

UDENS_API void udens_string_free(char* s);

/* ---- run configuration ------------------------------------------------- */

typedef struct udens_config udens_config;

/* Default configuration: grid step 0.05 with 12001 points, no constraint
 * configurations, complete triangle edges, bracket [0.20, 0.35]. */
UDENS_API int udens_config_create(udens_config** out);
UDENS_API int udens_config_parse(const char* json_text, udens_config** out);
UDENS_API void udens_config_free(udens_config* config);

UDENS_API int udens_config_set_grid(udens_config* config, double step, int count);
UDENS_API int udens_config_set_bracket(udens_config* config, double lo, double hi);
UDENS_API int udens_config_set_tolerance(udens_config* config, double tol);
UDENS_API int udens_config_set_sample_step(udens_config* config, double step);
UDENS_API int udens_config_set_edge_policy(udens_config* config, const char* policy);
UDENS_API int udens_config_add_triangle(udens_config* config, double x1, double x2, double y);
UDENS_API int udens_config_add_angle(udens_config* config, double theta);
UDENS_API int udens_config_to_json(const udens_config* config, char** json_out);

/* ---- solving ------------------------------------------------------------ */

typedef struct udens_result udens_result;

/* Runs the full pipeline: assemble constraint rows, bisect on delta, extract
 * the dual witness, verify it on the continuum, refine the grid until the
 * witness verifies. Returns UDENS_OK even when the result is unverified;
 * inspect udens_result_verified. */
UDENS_API int udens_solve(const udens_config* config, udens_result** out);
UDENS_API void udens_result_free(udens_result* result);

UDENS_API int udens_result_verified(const udens_result* result, int* verified);
UDENS_API int udens_result_delta_upper(const udens_result* result, double* delta);
UDENS_API int udens_result_bound_json(const udens_result* result, char** json_out);
UDENS_API int udens_result_spectrum_csv(const udens_result* result, char** csv_out);
UDENS_API int udens_result_witness_json(const udens_result* result, char** json_out);

/* ---- witness certificates ----------------------------------------------- */

typedef struct udens_witness udens_witness;

UDENS_API int udens_witness_parse(const char* json_text, udens_witness** out);
UDENS_API void udens_witness_free(udens_witness* witness);

/* Verifies W(0) >= 1 and W >= 0 on the continuum (Lipschitz guard plus
 * envelope tail). Writes a JSON report; *verified is 1 on success. */
UDENS_API int udens_witness_verify(const udens_witness* witness, double sample_step,
                                   char** report_json_out, int* verified);

/* delta = positive root of delta^2 = b delta + c for this certificate. */
UDENS_API int udens_witness_bound(const udens_witness* witness, double* delta, double* b,
                                  double* c);

/* ---- spectra and autocorrelation ----------------------------------------- */

typedef struct udens_spectrum udens_spectrum;

UDENS_API int udens_spectrum_parse_csv(const char* csv_text, udens_spectrum** out);
UDENS_API void udens_spectrum_free(udens_spectrum* spectrum);
UDENS_API int udens_spectrum_normalized(const udens_spectrum* spectrum, int* normalized);

/* Radial autocorrelation series f(r)/delta for r in [0, r_max] step r_step,
 * as CSV lines "r,value" or a self-contained SVG polyline plot. */
UDENS_API int udens_autocorr_csv(const udens_spectrum* spectrum, double r_max, double r_step,
                                 char** csv_out);
UDENS_API int udens_autocorr_svg(const udens_spectrum* spectrum, double r_max, double r_step,
                                 char** svg_out);

/* Scans angle/triangle candidates for constraint rows the spectrum violates.
 * params_json may be NULL for defaults, or
 *   {"theta": {"lo":..., "hi":..., "step":...},
 *    "boxes": [{"x1_lo":..,"x1_hi":..,"x2_lo":..,"x2_hi":..,
 *               "y_lo":..,"y_hi":..,"step":..}, ...],
 *    "edge_policy": "complete"}.
 * Results are a JSON array sorted by violation magnitude. */
UDENS_API int udens_search(const udens_spectrum* spectrum, const char* params_json,
                           char** hits_json_out);

/* ---- special functions and configurations -------------------------------- */

/* J0(x) for x in [0, 4000] with a certified absolute error bound. */
UDENS_API int udens_bessel_j0(double x, double* value, double* abs_error_bound);
UDENS_API int udens_bessel_j0_deriv(double x, double* value);

/* The two 7-vertex unit-distance graphs at the given angle: vertices, edges,
 * independence number, maximum independent sets. */
UDENS_API int udens_ct_graphs_json(double theta, char** json_out);

/* Triangle {(x1,0),(x2,y),(x2,-y)} under an edge policy (complete|unit|none). */
UDENS_API int udens_triangle_json(double x1, double x2, double y, const char* edge_policy,
                                  char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* UDENS_H */
