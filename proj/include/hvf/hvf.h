/* hvf: Hörmander vector field toolkit - public C API.
 *
 * Geometry of systems of Hörmander vector fields given symbolically:
 * commutator analysis (pointwise homogeneous dimension, generalized Métivier
 * index, local homogeneous dimension), subunit-metric distance oracles,
 * Monte Carlo ball volumes, and empirical verification suites for the sharp
 * embedding and geometric inequalities these systems satisfy.
 *
 * All functions return HVF_OK (0) on success or a negative error code;
 * hvf_last_error() describes the most recent failure in this thread.
 * Returned strings are owned by the caller and released with hvf_free().
 * Handles are opaque and single-threaded.
 */

#ifndef HVF_H
#define HVF_H

#ifdef __cplusplus
extern "C" {
#endif

#define HVF_OK 0
#define HVF_ERR_PARSE -1       /* DSL or config syntax error */
#define HVF_ERR_CONFIG -2      /* invalid or missing configuration */
#define HVF_ERR_DOMAIN -3      /* point/ball/domain violation */
#define HVF_ERR_BUDGET -4      /* enumeration or lattice budget exceeded */
#define HVF_ERR_NOSPAN -5      /* Hörmander condition failed numerically */
#define HVF_ERR_REGIME -6      /* exponent regime precondition violated */
#define HVF_ERR_RESOLUTION -7  /* oracle resolution insufficient */
#define HVF_ERR_IO -8          /* file I/O failure */
#define HVF_ERR_INVALID -9     /* invalid argument */
#define HVF_ERR_INTERNAL -10

typedef struct hvf_workspace hvf_workspace; /* configured model + lazy state */

const char* hvf_version(void);
const char* hvf_last_error(void);
void hvf_free(char* s);

/* Workspace lifecycle. The configuration is the plain-text key = value
 * format described in the README ([model], [domain], [oracle], [run],
 * [analyze], [suite.*] sections). */
int hvf_open(const char* config_text, hvf_workspace** out);
int hvf_open_file(const char* config_path, hvf_workspace** out);
void hvf_close(hvf_workspace* w);

/* Model introspection: dimension, field count, printed system. */
int hvf_model_info(hvf_workspace* w, char** json_out);

/* Commutator analysis: Hörmander verdict, nu(x) samples, generalized
 * Métivier index, local homogeneous dimension, embedding table.
 * json_out is the full report; csv_out (optional) the nu-sample table. */
int hvf_analyze(hvf_workspace* w, char** json_out, char** csv_out);

/* Subunit distance between two points (arrays of length n). */
int hvf_distance(hvf_workspace* w, const double* x, const double* y, int n, double* dist,
                 double* error_bound);
/* As above plus the approximate geodesic as CSV rows. */
int hvf_distance_report(hvf_workspace* w, const double* x, const double* y, int n,
                        int want_geodesic, char** json_out, char** geodesic_csv_out);

/* Monte Carlo ball volume with the configured sample count and seed. */
int hvf_ball_volume(hvf_workspace* w, const double* center, int n, double r, char** json_out);

/* Runs one verification suite; verdict_out receives 0 = PASS, 2 = FAIL,
 * 3 = FLAG (matching the CLI exit codes). */
int hvf_verify(hvf_workspace* w, const char* suite, char** json_out, char** csv_out,
               int* verdict_out);

/* Critical-exponent calculator in exact rational arithmetic; inputs are
 * rational literals ("3", "7/2"). */
int hvf_critical_exponents(const char* nu_tilde, int k, const char* p, char** json_out);

/* Persist / reuse the configured distance oracle. */
int hvf_oracle_save(hvf_workspace* w, const char* path);

/* Plain-text summary table of the JSON reports under a directory. */
int hvf_report_summary(const char* out_dir, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* HVF_H */
