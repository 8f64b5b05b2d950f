/* frachq: fractional Heisenberg dynamics through stable subordination.
 *
 * Plain C interface. Every function that can fail returns a frachq_status;
 * on failure frachq_last_error() holds a message for the calling thread.
 * Handles are opaque and owned by the caller (destroy functions accept NULL).
 * Matrices are passed as separate real and imaginary arrays in row-major
 * order. All functions are safe to call concurrently on distinct outputs;
 * handles are immutable after creation except frachq_config.
 */
#ifndef FRACHQ_H
#define FRACHQ_H

#include <stddef.h>

#if defined(FRACHQ_BUILDING_LIBRARY)
#define FRACHQ_API __attribute__((visibility("default")))
#else
#define FRACHQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frachq_status {
  FRACHQ_OK = 0,
  FRACHQ_ERR_DOMAIN = 1,
  FRACHQ_ERR_QUADRATURE = 2,
  FRACHQ_ERR_DIVERGENCE_RISK = 3,
  FRACHQ_ERR_DIMENSION = 4,
  FRACHQ_ERR_NOT_HERMITIAN = 5,
  FRACHQ_ERR_INVALID_DENSITY = 6,
  FRACHQ_ERR_UNSUPPORTED_MODE = 7,
  FRACHQ_ERR_BRANCH_CUT = 8,
  FRACHQ_ERR_EIGENSOLVER = 9,
  FRACHQ_ERR_POINT_MASS = 10,
  FRACHQ_ERR_NULL_ARGUMENT = 11,
  FRACHQ_ERR_OUT_OF_MEMORY = 12,
  FRACHQ_ERR_INTERNAL = 13
} frachq_status;

FRACHQ_API const char* frachq_version(void);
FRACHQ_API const char* frachq_status_string(frachq_status status);
/* Message of the last failure on this thread; "" if none. */
FRACHQ_API const char* frachq_last_error(void);

/* ---- quadrature configuration ---------------------------------------- */

typedef struct frachq_config frachq_config;

FRACHQ_API frachq_status frachq_config_create(frachq_config** out);
FRACHQ_API void frachq_config_destroy(frachq_config* cfg);
/* Keys: rel_tol, abs_tol, theta, max_panels, tail_cut. The value is checked
 * when the configuration is used, not when it is set. */
FRACHQ_API frachq_status frachq_config_set(frachq_config* cfg, const char* key, double value);
FRACHQ_API frachq_status frachq_config_get(const frachq_config* cfg, const char* key,
                                           double* value);

/* Functions taking a `const frachq_config*` accept NULL for the defaults. */

/* ---- kernel ---------------------------------------------------------- */

FRACHQ_API frachq_status frachq_kernel_eval(double alpha, double t, double s,
                                            const frachq_config* cfg, double* value,
                                            double* error);
FRACHQ_API frachq_status frachq_kernel_closed_half(double t, double s, double* value);
/* int_0^inf f_alpha(t, s) ds. */
FRACHQ_API frachq_status frachq_kernel_mass(double alpha, double t, const frachq_config* cfg,
                                            double* value, double* error);
/* lhs/rhs are {re, im}. */
FRACHQ_API frachq_status frachq_laplace_check(double alpha, double t, double z_re,
                                              double z_im, const frachq_config* cfg,
                                              double lhs[2], double rhs[2], double* error);

/* ---- oscillator and free particle ------------------------------------ */

typedef enum frachq_envelope_mode {
  FRACHQ_ENVELOPE_CLOSED_FORM = 0,
  FRACHQ_ENVELOPE_QUADRATURE = 1
} frachq_envelope_mode;

FRACHQ_API frachq_status frachq_oscillator_envelope(double alpha, double omega, double t,
                                                    frachq_envelope_mode mode,
                                                    const frachq_config* cfg, double* c,
                                                    double* s);
FRACHQ_API frachq_status frachq_oscillator_envelope_macdonald_half(double omega, double t,
                                                                   double* c, double* s);
/* coeffs is the row-major 2x2 map (Q0, P0) -> (Qt, Pt). envelope, if not
 * NULL, receives {C, S}. */
FRACHQ_API frachq_status frachq_oscillator_coeffs(double alpha, double m, double omega,
                                                  double hbar, double t,
                                                  frachq_envelope_mode mode,
                                                  const frachq_config* cfg, double coeffs[4],
                                                  double envelope[2]);

typedef enum frachq_free_mode {
  FRACHQ_FREE_PAPER_HALF = 0,
  FRACHQ_FREE_REGULARIZED_HALF = 1,
  FRACHQ_FREE_TRUNCATED_NUMERIC = 2
} frachq_free_mode;

/* Parses "paper-half", "regularized-half", "truncated-numeric". */
FRACHQ_API frachq_status frachq_free_mode_parse(const char* name, frachq_free_mode* mode);
FRACHQ_API const char* frachq_free_mode_name(frachq_free_mode mode);

typedef struct frachq_free_diagnostics {
  int divergent;
  /* Fields below are meaningful when has_truncation is nonzero. */
  int has_truncation;
  double s_max;
  double value_s100; /* truncated integral up to s_max / 100 */
  double value_s10;
  double value_s1;
  int has_measured_exponent;
  double measured_exponent;
  double predicted_exponent;
  double tail_coefficient;
  double tail_growth_term;
  double error_estimate;
} frachq_free_diagnostics;

/* diag may be NULL. s_max is used by the truncated mode only. */
FRACHQ_API frachq_status frachq_free_g(double alpha, double t, frachq_free_mode mode,
                                       double s_max, const frachq_config* cfg, double* g,
                                       frachq_free_diagnostics* diag);
/* g and diag may be NULL. */
FRACHQ_API frachq_status frachq_free_coeffs(double alpha, double t, double m,
                                            frachq_free_mode mode, double s_max,
                                            const frachq_config* cfg, double coeffs[4],
                                            double* g, frachq_free_diagnostics* diag);

/* ---- Gaussian packet statistics -------------------------------------- */

typedef struct frachq_packet {
  double x0;
  double p0;
  double b;
  double hbar;
} frachq_packet;

typedef struct frachq_moments {
  double mean_q;
  double mean_p;
  double disp_q;
  double disp_p;
  double uncertainty_product;
} frachq_moments;

FRACHQ_API frachq_status frachq_initial_moments(const frachq_packet* packet,
                                                frachq_moments* out);
FRACHQ_API frachq_status frachq_evolve_moments(const frachq_packet* packet,
                                               const double coeffs[4], frachq_moments* out);
/* Reference closed form of the alpha = 1/2 free-particle position dispersion,
 * (b^2/2)(1 + hbar^2 t^4 / (m^2 b^4)). */
FRACHQ_API frachq_status frachq_printed_free_disp_q(const frachq_packet* packet, double m,
                                                    double t, double* out);

/* ---- matrices and spectra -------------------------------------------- */

typedef enum frachq_role {
  FRACHQ_ROLE_HERMITIAN = 0, /* Hamiltonian or observable */
  FRACHQ_ROLE_DENSITY = 1
} frachq_role;

typedef struct frachq_matrix frachq_matrix;
typedef struct frachq_spectrum frachq_spectrum;

/* re and im hold dim*dim entries; im may be NULL for a real matrix. */
FRACHQ_API frachq_status frachq_matrix_create(int dim, const double* re, const double* im,
                                              frachq_role role, frachq_matrix** out);
FRACHQ_API void frachq_matrix_destroy(frachq_matrix* m);
FRACHQ_API int frachq_matrix_dim(const frachq_matrix* m);
FRACHQ_API frachq_role frachq_matrix_role(const frachq_matrix* m);
FRACHQ_API frachq_status frachq_matrix_get(const frachq_matrix* m, double* re, double* im);

FRACHQ_API frachq_status frachq_spectrum_create(const frachq_matrix* hamiltonian, double hbar,
                                                frachq_spectrum** out);
FRACHQ_API void frachq_spectrum_destroy(frachq_spectrum* spec);
FRACHQ_API int frachq_spectrum_dim(const frachq_spectrum* spec);
FRACHQ_API frachq_status frachq_spectrum_energies(const frachq_spectrum* spec,
                                                  double* energies);

typedef enum frachq_method {
  FRACHQ_METHOD_SPECTRAL = 0,     /* principal-branch eigenvalue powers */
  FRACHQ_METHOD_SUBORDINATION = 1 /* kernel average of the unitary flow */
} frachq_method;

/* Evolves an observable (Heisenberg picture) or a density matrix (von
 * Neumann picture) according to the role of `op`. t >= 0; t = 0 returns a
 * copy. err_estimate (may be NULL) is 0 for the spectral method. */
FRACHQ_API frachq_status frachq_evolve(const frachq_spectrum* spec, const frachq_matrix* op,
                                       double alpha, double t, frachq_method method,
                                       const frachq_config* cfg, frachq_matrix** out,
                                       double* err_estimate);

/* lhs = Tr[rho_t A], rhs = Tr[rho A_t]. */
FRACHQ_API frachq_status frachq_duality_check(const frachq_spectrum* spec,
                                              const frachq_matrix* rho,
                                              const frachq_matrix* observable, double alpha,
                                              double t, double* lhs, double* rhs);

/* ---- verification suites --------------------------------------------- */

typedef enum frachq_verify_level {
  FRACHQ_VERIFY_QUICK = 0,
  FRACHQ_VERIFY_FULL = 1
} frachq_verify_level;

typedef void (*frachq_verify_callback)(const char* name, int passed, double residual,
                                       double tolerance, const char* detail, void* user);

/* Runs the suite, calling cb (may be NULL) once per check. *failed receives
 * the number of failing checks. */
FRACHQ_API frachq_status frachq_verify(frachq_verify_level level, frachq_verify_callback cb,
                                       void* user, int* failed);

#ifdef __cplusplus
}
#endif

#endif /* FRACHQ_H */
