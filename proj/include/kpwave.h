/*
 * kpwave C API: evaluation, rendering and analysis of explicit singular
 * solutions of the KP equation behind opaque handles and error codes.
 *
 * Every function that can fail returns a kpw_status; on failure a
 * thread-local message is available from kpw_last_error().  Strings handed
 * back through char** are heap-allocated; release them with kpw_free().
 */

#ifndef KPWAVE_H
#define KPWAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct kpw_spec kpw_spec;
typedef struct kpw_field kpw_field;

typedef enum {
  KPW_OK = 0,
  KPW_EINVAL = 1,  /* bad arguments, parse or validation failure */
  KPW_ERUNTIME = 2 /* evaluation or I/O failure */
} kpw_status;

typedef enum {
  KPW_QUANTITY_RAW = 0,
  KPW_QUANTITY_LOG = 1,
  KPW_QUANTITY_CLAMP = 2
} kpw_quantity;

typedef enum { KPW_FORMAT_CSV = 0, KPW_FORMAT_PGM = 1 } kpw_format;

typedef struct {
  double x_min, x_max, y_min, y_max;
  int nx, ny;
  double t;
} kpw_grid;

typedef struct {
  /* 0 = unique, 1 = line of solutions, 2 = degenerate */
  int kind;
  double vx, vy;         /* value or base point of the line */
  double dir_x, dir_y;   /* unit direction when kind == 1 */
  char reason[128];      /* set when kind == 2 */
} kpw_velocity_result;

const char* kpw_version(void);
const char* kpw_last_error(void);
void kpw_free(void* ptr);

/* ---- specs ---------------------------------------------------------- */

kpw_status kpw_spec_parse(const char* json_text, kpw_spec** out);
kpw_status kpw_spec_load_file(const char* path, kpw_spec** out);
void kpw_spec_free(kpw_spec* spec);

/* JSON round trip; stable key order and float formatting. */
kpw_status kpw_spec_save(const kpw_spec* spec, char** out_json);

/* Report of violated invariants; *out_report is an empty string when the
 * spec is valid.  *n_violations receives the count. */
kpw_status kpw_spec_validate(const kpw_spec* spec, char** out_report,
                             int* n_violations);

/* Grid block embedded in the spec file, if any. */
kpw_status kpw_spec_grid(const kpw_spec* spec, kpw_grid* out);

/* Parameter scaling map (lambda, mu -> /delta, rho -> *delta, walls
 * p,q,c -> /delta); the scaled field satisfies
 * f_scaled(x,y,t) = delta^-2 f(x/delta, y/delta^2, t/delta^3). */
kpw_status kpw_spec_scale(const kpw_spec* spec, double delta, kpw_spec** out);

/* ---- evaluation ------------------------------------------------------ */

kpw_status kpw_eval_f(const kpw_spec* spec, double x, double y, double t,
                      double* value, int* near_singular);

/* side: +1 keeps the tau > 0 component, -1 the tau < 0 one. */
kpw_status kpw_eval_half_cut(const kpw_spec* spec, int side, double x, double y,
                             double t, double* value);

double kpw_regularize_log(double f);
double kpw_clamp_renormalize(double f, double m);

/* ---- fields ---------------------------------------------------------- */

/* grid == NULL uses the spec's embedded grid block. */
kpw_status kpw_sample_field(const kpw_spec* spec, const kpw_grid* grid,
                            kpw_quantity quantity, double clamp_m, int workers,
                            kpw_field** out);
void kpw_field_free(kpw_field* field);

kpw_status kpw_field_size(const kpw_field* field, int* nx, int* ny);
kpw_status kpw_field_value(const kpw_field* field, int i, int j, double* value,
                           int* masked);
kpw_status kpw_field_raw_max(const kpw_field* field, double* value, double* x,
                             double* y);
kpw_status kpw_field_export(const kpw_field* field, kpw_format format,
                            char** out_bytes);
kpw_status kpw_field_save(const kpw_field* field, kpw_format format,
                          const char* path);

/* Cells with lower < value < upper (unmasked); returns the count and
 * optionally a CSV "i,j,x,y,value" listing. */
kpw_status kpw_contour_band(const kpw_field* field, double lower, double upper,
                            int* n_cells, char** out_csv);

/* ---- kinematics ------------------------------------------------------ */

/* Profile velocity of the spec (single wall, two-wall superposition, or a
 * single breather). */
kpw_status kpw_velocity(const kpw_spec* spec, kpw_velocity_result* out);

/* (x,y,t,f) -> (x',y',t',eta0,height); spec must carry a physical block. */
kpw_status kpw_to_physical(const kpw_spec* spec, double x, double y, double t,
                           double f, double* x_prime, double* y_prime,
                           double* t_prime, double* eta0, double* height_m);

/* ---- analysis -------------------------------------------------------- */

/* KP residual report (JSON) at fd_step with the Richardson half-step pair. */
kpw_status kpw_residual_json(const kpw_spec* spec, const kpw_grid* grid,
                             double fd_step, char** out_json);

/* Dispersion table CSV "k,omega_exact,omega_kp" for n samples of k in
 * [k_min, k_max] at fixed l; requires a physical block. */
kpw_status kpw_dispersion_csv(const kpw_spec* spec, double k_min, double k_max,
                              int n, double l, char** out_csv);

/* Marching-squares singular set as CSV "chain,x,y". */
kpw_status kpw_singular_curve_csv(const kpw_spec* spec, const kpw_grid* grid,
                                  char** out_csv);

/* Time sweep + OTIN event summary (JSON).  t_values may be NULL to use the
 * default peak/background windows; export_dir may be NULL. */
kpw_status kpw_otin_scan_json(const kpw_spec* spec, const kpw_grid* grid,
                              const double* t_values, int n_t,
                              kpw_quantity render_quantity, double clamp_m,
                              const char* export_dir, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* KPWAVE_H */
