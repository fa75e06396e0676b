#ifndef CAVITYQED_H
#define CAVITYQED_H

/* C interface to the cavity-QED emitter-decay toolkit.
 *
 * All entry points return a status code (CQ_OK on success); on failure a
 * thread-local message is available via cq_last_error(). Objects are opaque
 * handles released with the matching *_free function. Array outputs use a
 * caller-provided buffer with explicit capacity; when the capacity is too
 * small the call fails with CQ_ERR_CAPACITY and reports the required count.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CQ_OK = 0,
  CQ_ERR_CONFIG = 2,
  CQ_ERR_NUMERICS = 3,
  CQ_ERR_BOUND_STATE = 4,
  CQ_ERR_IO = 5,
  CQ_ERR_CAPACITY = 6
};

enum {
  CQ_GRID_SPECTRAL = 0,   /* resolves F(omega) */
  CQ_GRID_RESPONSE = 1,   /* resolves U(omega) for a given horizon t_end */
  CQ_GRID_QUADRATURE = 2  /* dense grid for the sum-rule integral */
};

enum { CQ_RESONANT = 0, CQ_SUPPRESSED = 1 };

typedef struct cq_config cq_config;
typedef struct cq_model cq_model;

const char* cq_version(void);
/* Message of the most recent failure on this thread ("" if none). */
const char* cq_last_error(void);

/* --- configuration ------------------------------------------------------- */

int cq_config_from_preset(const char* name, cq_config** out);
int cq_config_from_json(const char* json_text, cq_config** out);
int cq_config_load(const char* path, cq_config** out);
int cq_config_save(const cq_config* cfg, const char* path);
/* Serialize to JSON. Writes up to cap bytes (NUL-terminated) and reports the
 * full required size (including NUL) in *needed; cap may be 0 to query. */
int cq_config_to_json(const cq_config* cfg, char* buf, size_t cap, size_t* needed);
int cq_config_set(cq_config* cfg, const char* key, double value);
int cq_config_get(const cq_config* cfg, const char* key, double* out);
void cq_config_free(cq_config* cfg);

/* --- model --------------------------------------------------------------- */

/* Builds the spectral tables; the config is copied. */
int cq_model_new(const cq_config* cfg, cq_model** out);
void cq_model_free(cq_model* m);

int cq_spectral_eval(const cq_model* m, const double* omega, size_t n, double* f_out);
int cq_green_eval(const cq_model* m, double omega, double* re_g, double* im_g, double* rho);
/* Nonlinear Lamb shift: tabulated (fast) and adaptive (reference) variants. */
int cq_lamb_shift_table(const cq_model* m, double omega, double* delta);
int cq_lamb_shift_exact(const cq_model* m, double omega, double* delta);
int cq_kernel_eval(const cq_model* m, const double* omega, size_t n, double* delta_out,
                   double* u_out);
int cq_default_grid(const cq_model* m, int which, double t_end, double* buf, size_t cap,
                    size_t* count);
int cq_sum_rule(const cq_model* m, double* value);

int cq_find_resonances(const cq_model* m, double* omega_r, int* kind, double* width,
                       double* height, size_t cap, size_t* count);
int cq_bound_state(const cq_model* m, int* exists, double* omega_j, double* gamma_crit);
/* gamma_crit together with the integral of F(omega)/omega it derives from. */
int cq_critical_gamma(const cq_model* m, double* gamma_crit, double* f_over_omega_integral);

/* solver: "laplace" | "volterra" | "systembath". */
int cq_evolve(const cq_model* m, const char* solver, double t_end, double dt, double* t,
              double* re_c, double* im_c, size_t cap, size_t* count);
/* System-and-bath run including the total-norm diagnostic. */
int cq_evolve_bath(const cq_model* m, double t_end, double dt, double* t, double* re_c,
                   double* im_c, double* norm, size_t cap, size_t* count, int* mode_count);

/* Regime report as a JSON object (same two-call buffer protocol as
 * cq_config_to_json). When solver is non-NULL a trace is computed with the
 * model's configured dt / t_end and revival fields are filled from it. */
int cq_analyze(const cq_model* m, const char* solver, char* buf, size_t cap, size_t* needed);

/* One-parameter sweep; rows as a JSON array. Per-point failures are recorded
 * in the row's "error" field without aborting the sweep. */
int cq_sweep(const cq_config* base, const char* param, const double* values, size_t n_values,
             const char* solver, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* CAVITYQED_H */
