/* waveframe: frame systems on irregular grids with arbitrary dilations.
 *
 * C API over the core library: opaque handles, integer status codes,
 * JSON-encoded structured inputs and reports. Every function returns WF_OK
 * (0) on success or a WF_E* code; wf_last_error() describes the most recent
 * failure on the calling thread. Strings returned through char** outputs are
 * owned by the caller and must be released with wf_string_free().
 */
#ifndef WAVEFRAME_H
#define WAVEFRAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

enum {
  WF_OK = 0,
  WF_EDOMAIN = 1,        /* invalid argument / math domain */
  WF_EPRECONDITION = 2,  /* a stated hypothesis failed */
  WF_ECONSTRUCTION = 3,  /* a builder could not certify its output */
  WF_ENUMERIC = 4,       /* non-finite values, quadrature failure */
  WF_ERESOLUTION = 5,    /* grid too coarse for the requested oscillation */
  WF_ECONDITIONING = 6,  /* Gram matrix numerically singular */
  WF_EEVALUATION = 7,    /* pointwise evaluation failure */
  WF_ECONFIG = 8,        /* inconsistent configuration */
  WF_EIO = 9,            /* file parse / write problems */
  WF_EUNKNOWN = 100
};

/* thread-local message for the last failing call */
const char* wf_last_error(void);
void wf_string_free(char* s);
const char* wf_version(void);

/* ---- point sets --------------------------------------------------------- */
typedef struct wf_pointset wf_pointset;

/* CSV: one point per line, comma-separated coordinates, '#' comments */
int wf_pointset_from_csv(const char* path, wf_pointset** out);
int wf_pointset_create(int dim, const double* coords, size_t n_points, wf_pointset** out);
void wf_pointset_free(wf_pointset* ps);
int wf_pointset_dim(const wf_pointset* ps, int* out);
int wf_pointset_size(const wf_pointset* ps, size_t* out);

int wf_separation(const wf_pointset* ps, double* out);
/* window-count densities at radius r; center_step <= 0 picks separation/4 */
int wf_density(const wf_pointset* ps, double r, double center_step, double* lower,
               double* upper);
/* full density report as JSON (lower/upper density, separation, gap over the
 * given region, separated flag) */
int wf_density_report(const wf_pointset* ps, double r, double center_step,
                      const char* gap_region_json, double gap_probe_step, char** report_json);
int wf_gap(const wf_pointset* ps, const char* region_json, double probe_step, double* out);

/* ---- regions and coverings ---------------------------------------------- */
int wf_region_measure(const char* region_json, double* out);
int wf_region_contains(const char* region_json, const double* x, int dim, int* out);
int wf_region_bbox(const char* region_json, char** bbox_json);
/* region A*V \ V as a region literal */
int wf_dilation_ring(const char* matrix_json, const char* v_region_json, char** ring_json);
int wf_is_expansive(const char* matrix_json, int* out);
/* covering: {"matrix":..,"base":..,"j_min":..,"j_max":..} or {"members":[..]} */
int wf_covering_index(const char* covering_json, const char* probe_region_json,
                      double probe_step, int* out);

/* ---- partitions of unity ------------------------------------------------ */
int wf_rpu_sum_squares(const char* rpu_json, const double* x, int dim, double* out);
/* report fields: p_hat, P_hat, probe_step, violations */
int wf_rpu_bounds(const char* rpu_json, const char* region_json, double probe_step,
                  char** report_json);
int wf_rpu_normalize(const char* rpu_json, char** normalized_rpu_json);

/* ---- exponential frames -------------------------------------------------- */
/* method: "gram", "empirical" (band-limited ensemble strictly inside the
 * region) or "empirical-span" (random span combinations plus the extreme
 * Gram eigenvectors); report fields: m, M, kind, truncation_R,
 * ensemble_seed */
int wf_frame_bounds(const wf_pointset* ps, const char* region_json, const char* method,
                    int measure_normalized, int ensemble, uint64_t seed, char** report_json);
int wf_gram_csv(const wf_pointset* ps, const char* region_json, int measure_normalized,
                const char* path);
int wf_check_beurling_1d(const wf_pointset* ps, double a, double density_r, int* out);
int wf_check_beurling_ball(const wf_pointset* ps, double r, const char* gap_region_json,
                           double probe_step, int* out);
int wf_check_kadec(const wf_pointset* ps, double spacing, double L, int* out);

/* ---- atom systems -------------------------------------------------------- */
typedef struct wf_system wf_system;
typedef struct wf_field wf_field;
typedef struct wf_coeffs wf_coeffs;

/* entries: shannon_1d, kadec_riesz_1d, bspline_1d, radial_2d,
 * radial_2d_shannon, directional_2d, spiral_2d, gabor_nonharmonic, recipe.
 * overrides_json: numeric map, e.g. {"j_min":-3,"j_max":3,"jitter":0.125} */
int wf_system_build(const char* entry, const char* overrides_json, wf_system** out);
int wf_system_from_manifest_file(const char* path, wf_system** out);
void wf_system_free(wf_system* sys);
int wf_system_manifest(const wf_system* sys, char** manifest_json);
/* consolidated certificate; options: {"ensemble":N,"seed":N,"recon_signals":N} */
int wf_system_validate(const wf_system* sys, const char* options_json, char** report_json);
/* writes manifest.json, validation.json and plot-ready CSVs into out_dir */
int wf_system_build_artifacts(const wf_system* sys, const char* options_json,
                              const char* out_dir, char** summary_json);

/* ---- sampled grids ------------------------------------------------------- */
/* reads the binary grid format (WFG1) or the CSV grid dump */
int wf_field_read(const char* path, wf_field** out);
/* format: "wfg" (binary) or "csv" */
int wf_field_write(const wf_field* f, const char* path, const char* format);
void wf_field_free(wf_field* f);
int wf_field_info(const wf_field* f, char** info_json);
/* synthesize a seeded test signal on the system's recommended grid */
int wf_field_test_signal(const wf_system* sys, uint64_t seed, wf_field** out);

/* ---- analysis / reconstruction ------------------------------------------- */
int wf_analyze(const wf_system* sys, const wf_field* f, wf_coeffs** out);
void wf_coeffs_free(wf_coeffs* c);
int wf_coeffs_write_csv(const wf_coeffs* c, const char* path);
/* layouts are re-derived from the system and the grid template */
int wf_coeffs_read_csv(const wf_system* sys, const wf_field* grid_template, const char* path,
                       wf_coeffs** out);
/* reconstruct on the template's grid; reference may be NULL; report carries
 * per-level engines and relative errors when a reference is given */
int wf_reconstruct(const wf_system* sys, const wf_coeffs* c, const wf_field* grid_template,
                   const wf_field* reference, wf_field** out, char** report_json);
/* min/max frame ratio over a seeded band-limited ensemble */
int wf_empirical_frame_bounds(const wf_system* sys, int ensemble, uint64_t seed,
                              char** report_json);

#if defined(__cplusplus)
}
#endif

#endif /* WAVEFRAME_H */
