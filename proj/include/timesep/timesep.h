/* timesep: time/space separation of Lorentzian 4-metrics.
 *
 * C interface over the core library. Spacetimes are opaque handles
 * loaded from TOML spec files; numeric entry points exchange plain
 * double arrays (symmetric forms as row-major 4x4 = 16 doubles), and
 * the report entry points return the same JSON documents the CLI
 * prints. All functions return a status code; on failure a
 * human-readable message is available from tsep_last_error() until the
 * next call on the same thread.
 */

#ifndef TIMESEP_H
#define TIMESEP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef TSEP_API
#if defined(_WIN32)
#define TSEP_API
#else
#define TSEP_API __attribute__((visibility("default")))
#endif
#endif

typedef enum tsep_status {
  TSEP_OK = 0,
  TSEP_E_ZERO_VECTOR,
  TSEP_E_NULL_VECTOR,
  TSEP_E_NOT_TIMELIKE,
  TSEP_E_DEGENERATE_FORM,
  TSEP_E_DEGENERATE_METRIC,
  TSEP_E_NO_CONVERGENCE,
  TSEP_E_SYNTAX,
  TSEP_E_UNKNOWN_FUNCTION,
  TSEP_E_UNBOUND_VARIABLE,
  TSEP_E_MATH_DOMAIN,
  TSEP_E_PARSE,
  TSEP_E_UNKNOWN_COORDINATE,
  TSEP_E_ASYMMETRIC_METRIC,
  TSEP_E_EXCLUDED_POINT,
  TSEP_E_WRONG_SIGNATURE,
  TSEP_E_NOT_RIEMANNIAN,
  TSEP_E_EIGENCOUNT,
  TSEP_E_RESOLUTION_EXCEEDED,
  TSEP_E_INVALID_ARGUMENT,
  TSEP_E_IO,
  TSEP_E_INTERNAL
} tsep_status;

/* Message for the most recent failure on this thread; never NULL. */
TSEP_API const char* tsep_last_error(void);
TSEP_API const char* tsep_status_name(tsep_status status);

/* ---- spacetime handles ---- */

typedef struct tsep_spacetime tsep_spacetime;

TSEP_API tsep_status tsep_spacetime_load(const char* path,
                                         tsep_spacetime** out);
TSEP_API tsep_status tsep_spacetime_parse(const char* toml_text,
                                          const char* source_name,
                                          tsep_spacetime** out);
TSEP_API void tsep_spacetime_free(tsep_spacetime* spacetime);
TSEP_API const char* tsep_spacetime_name(const tsep_spacetime* spacetime);

/* ---- pointwise geometry ---- */

TSEP_API tsep_status tsep_metric_at(const tsep_spacetime* spacetime,
                                    const double point[4], double out[16]);
TSEP_API tsep_status tsep_riemann_at(const tsep_spacetime* spacetime,
                                     const double point[4], double out[16]);

/* The timelike eigendirection of g under h at a point: h-unit, largest
 * component positive, with its (negative) eigenvalue and the gap to the
 * rest of the spectrum. low_confidence is set when the gap is below
 * 1e-8 of the spectrum scale. */
TSEP_API tsep_status tsep_time_line_at(const tsep_spacetime* spacetime,
                                       const double point[4],
                                       double direction[4],
                                       double* eigenvalue, double* gap,
                                       int* low_confidence);

/* Christoffel symbols at a point, gamma[(mu*4 + nu)*4 + rho]. */
TSEP_API tsep_status tsep_christoffel_at(const tsep_spacetime* spacetime,
                                         const double point[4],
                                         double gamma[64]);

/* g-orthonormal frame of the time line's orthogonal complement; three
 * vectors, frame[i*4 + k]. */
TSEP_API tsep_status tsep_space_frame_at(const tsep_spacetime* spacetime,
                                         const double point[4],
                                         double frame[12]);

/* ---- pointwise algebra (no spacetime handle needed) ---- */

/* Riemannian metric induced by a timelike v: flips g along v, keeps it
 * on the g-orthogonal complement. tol < 0 selects the default
 * timelike-classification tolerance. */
TSEP_API tsep_status tsep_riemann_from_timelike(const double g[16],
                                                const double v[4], double tol,
                                                double h_out[16]);

/* Solves g x = lambda h x and returns the unique negative-eigenvalue
 * line; tol < 0 selects the default counting tolerance. */
TSEP_API tsep_status tsep_timelike_from_riemann(const double g[16],
                                                const double h[16],
                                                double tol,
                                                double direction[4],
                                                double* eigenvalue,
                                                double* gap,
                                                int* low_confidence);

/* ---- curves and differentiation ---- */

/* Z/2 holonomy of the time line bundle over a declared loop. */
TSEP_API tsep_status tsep_loop_holonomy(const tsep_spacetime* spacetime,
                                        const char* loop_name, int n_samples,
                                        int* holonomy, int* samples_used,
                                        double* min_alignment);

/* Covariant derivative of the field F (four expression strings) along
 * s = multiplier * (time line direction). */
TSEP_API tsep_status tsep_time_derivative(const tsep_spacetime* spacetime,
                                          const char* multiplier,
                                          const char* const field[4],
                                          const double point[4],
                                          double out[4]);

/* Covariant derivative along s = sum_i coeffs[i] * space_frame[i]. */
TSEP_API tsep_status tsep_space_derivative(const tsep_spacetime* spacetime,
                                           const char* const coeffs[3],
                                           const char* const field[4],
                                           const double point[4],
                                           double out[4]);

/* ---- full reports ----
 *
 * Mirror the CLI subcommands: the JSON written to *json_out is exactly
 * what `timesep --output json` prints, and *exit_status is the process
 * exit code the CLI would use (0 ok, 1 error, 2 not orientable).
 * Domain errors are captured inside the report rather than returned,
 * so these fail only on invalid arguments or allocation. Free the
 * string with tsep_string_free. Point/field/coefficient arguments are
 * comma-separated constant expressions, e.g. "0,4,pi/2,0". */

TSEP_API tsep_status tsep_report_validate(const char* spec_path, int samples,
                                          uint64_t seed, char** json_out,
                                          int* exit_status);
TSEP_API tsep_status tsep_report_split(const char* spec_path,
                                       const char* point, double tol,
                                       char** json_out, int* exit_status);
TSEP_API tsep_status tsep_report_orient(const char* spec_path, int n_samples,
                                        char** json_out, int* exit_status);
TSEP_API tsep_status tsep_report_section(const char* spec_path,
                                         const char* multiplier,
                                         const char* grid, char** json_out,
                                         int* exit_status);
TSEP_API tsep_status tsep_report_derive(const char* spec_path,
                                        const char* mode, const char* section,
                                        const char* field, const char* point,
                                        int verbose, char** json_out,
                                        int* exit_status);
TSEP_API tsep_status tsep_report_christoffel(const char* spec_path,
                                             const char* point,
                                             char** json_out,
                                             int* exit_status);

TSEP_API void tsep_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TIMESEP_H */
