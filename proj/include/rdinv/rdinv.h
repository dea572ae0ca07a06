/* C interface to the rdinv library. All handles are opaque; every function
 * returning rdinv_status leaves a message retrievable with
 * rdinv_last_error() on failure. Coefficient amplitudes are passed as
 * N x (n+1) row-major arrays, row k-1 holding the bump amplitudes of mu_k. */
#ifndef RDINV_H
#define RDINV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef RDINV_BUILDING_LIBRARY
#    define RDINV_API __declspec(dllexport)
#  else
#    define RDINV_API __declspec(dllimport)
#  endif
#else
#  define RDINV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdinv_status {
    RDINV_OK = 0,
    RDINV_INVALID_ARGUMENT,
    RDINV_BLOWUP_DETECTED,
    RDINV_NEWTON_DIVERGENCE,
    RDINV_PROBE_OUTSIDE_DOMAIN,
    RDINV_MALFORMED_TRACE_FILE,
    RDINV_MALFORMED_COEFFICIENT_FILE,
    RDINV_BUDGET_TOO_SMALL,
    RDINV_INVALID_ROOTS,
    RDINV_ASYMMETRIC_DATA,
    RDINV_IO_ERROR,
    RDINV_INTERNAL_ERROR
} rdinv_status;

typedef struct rdinv_problem rdinv_problem;
typedef struct rdinv_trajectory rdinv_trajectory;
typedef struct rdinv_measurements rdinv_measurements;
typedef struct rdinv_result rdinv_result;
typedef struct rdinv_report rdinv_report;

typedef double (*rdinv_field_fn)(double x, void* user);
typedef double (*rdinv_nonlinearity_fn)(double x, double u, void* user);

/* Message of the last failure on the calling thread ("" if none). */
RDINV_API const char* rdinv_last_error(void);
RDINV_API const char* rdinv_status_name(rdinv_status status);

/* ---- problem: domain, diffusion, boundary weights, coefficients, experiments ---- */

RDINV_API rdinv_status rdinv_problem_create(double a, double b, double D, double T, rdinv_problem** out);
RDINV_API void rdinv_problem_destroy(rdinv_problem* p);
/* alpha1 u(a) - beta1 u_x(a) = 0, alpha2 u(b) + beta2 u_x(b) = 0. Default Neumann. */
RDINV_API rdinv_status rdinv_problem_set_robin(rdinv_problem* p, double alpha1, double beta1, double alpha2,
                                               double beta2);
RDINV_API rdinv_status rdinv_problem_set_horizon(rdinv_problem* p, double T);
/* mu_k as bump expansions with basis size n (n+1 amplitudes per field). */
RDINV_API rdinv_status rdinv_problem_set_basis_coefficients(rdinv_problem* p, int n, int N, const double* h);
RDINV_API rdinv_status rdinv_problem_set_constant_coefficients(rdinv_problem* p, int N, const double* mu);
/* Replaces mu_k (1-based k, at most one past the current degree). */
RDINV_API rdinv_status rdinv_problem_set_coefficient_fn(rdinv_problem* p, int k, rdinv_field_fn fn, void* user);
/* Known part g(x, u); dg_du may be NULL. fn = NULL clears it. */
RDINV_API rdinv_status rdinv_problem_set_nonlinearity(rdinv_problem* p, rdinv_nonlinearity_fn g,
                                                      rdinv_nonlinearity_fn dg_du, void* user);
/* Initial conditions are numbered in insertion order; each is one experiment. */
RDINV_API rdinv_status rdinv_problem_add_initial_constant(rdinv_problem* p, double value);
RDINV_API rdinv_status rdinv_problem_add_initial_fn(rdinv_problem* p, rdinv_field_fn fn, void* user);
RDINV_API rdinv_status rdinv_problem_clear_initial(rdinv_problem* p);
RDINV_API rdinv_status rdinv_problem_initial_count(const rdinv_problem* p, size_t* count);
/* Number of admissibility violations over all experiments. The first
 * violation is described in `detail` (truncated to `detail_len`). */
RDINV_API rdinv_status rdinv_problem_validate(const rdinv_problem* p, double tol, int M, size_t* violations,
                                              char* detail, size_t detail_len);

/* ---- forward solves ---- */

typedef struct rdinv_solver_options {
    double theta;
    double dt; /* 0: T / 600 */
    double newton_tol;
    int newton_max_iter;
    double blowup_cap;
    int max_step_halvings;
} rdinv_solver_options;

RDINV_API void rdinv_solver_options_default(rdinv_solver_options* opt);

/* Solves experiment `experiment` (0-based) on M intervals. `opt` may be NULL. */
RDINV_API rdinv_status rdinv_solve(const rdinv_problem* p, size_t experiment, int M, const double* times,
                                   size_t ntimes, const rdinv_solver_options* opt, rdinv_trajectory** out);
RDINV_API void rdinv_trajectory_destroy(rdinv_trajectory* t);
RDINV_API rdinv_status rdinv_trajectory_shape(const rdinv_trajectory* t, size_t* ntimes, size_t* nnodes);
/* Any output pointer may be NULL. values is ntimes x nnodes row-major. */
RDINV_API rdinv_status rdinv_trajectory_copy(const rdinv_trajectory* t, double* times, double* nodes,
                                             double* values);
/* u(t, x0) and u_x(t, x0) at every output instant (ntimes entries each). */
RDINV_API rdinv_status rdinv_trajectory_probe(const rdinv_trajectory* t, double x0, double* u, double* dudx);
RDINV_API rdinv_status rdinv_trajectory_write_csv(const rdinv_trajectory* t, const char* path);
RDINV_API rdinv_status rdinv_trajectory_write_final_csv(const rdinv_trajectory* t, const char* path);

/* ---- measurements ---- */

/* Traces of every experiment of `p` at x0 on K uniform instants of (0, eps]. */
RDINV_API rdinv_status rdinv_synthesize(const rdinv_problem* p, double x0, double eps, int K, int M,
                                        const rdinv_solver_options* opt, int threads, rdinv_measurements** out);
RDINV_API void rdinv_measurements_destroy(rdinv_measurements* m);
RDINV_API rdinv_status rdinv_measurements_read(const char* path, rdinv_measurements** out);
RDINV_API rdinv_status rdinv_measurements_write(const rdinv_measurements* m, const char* path);
RDINV_API rdinv_status rdinv_measurements_add_noise(rdinv_measurements* m, double sigma, uint64_t seed);
RDINV_API rdinv_status rdinv_measurements_info(const rdinv_measurements* m, double* x0, double* eps,
                                               size_t* count, size_t* samples);
/* Copies trace i (0-based); each array holds `samples` entries. */
RDINV_API rdinv_status rdinv_measurements_trace(const rdinv_measurements* m, size_t i, double* times, double* u,
                                                double* dudx);

/* ---- inversion ---- */

typedef struct rdinv_invert_options {
    int n;                  /* basis size */
    int M;                  /* grid intervals for every candidate solve */
    int budget;             /* objective evaluations */
    int include_derivative; /* 0 drops the u_x misfit */
    double derivative_weight;
    double fd_step;
    double grad_tol;
    double step_tol;
    int restarts;
    uint64_t seed;          /* restart starting points */
    int threads;
    double penalty;
    rdinv_solver_options solver;
} rdinv_invert_options;

RDINV_API void rdinv_invert_options_default(rdinv_invert_options* opt);

/* The problem supplies domain, D, boundary weights, g and the initial
 * conditions (one per trace); its coefficients are ignored. */
RDINV_API rdinv_status rdinv_objective(const rdinv_problem* p, const rdinv_measurements* m,
                                       const rdinv_invert_options* opt, const double* h, double* value);
/* init and truth may be NULL (init defaults to zero amplitudes). */
RDINV_API rdinv_status rdinv_invert(const rdinv_problem* p, const rdinv_measurements* m,
                                    const rdinv_invert_options* opt, const double* init, const double* truth,
                                    rdinv_result** out);
RDINV_API void rdinv_result_destroy(rdinv_result* r);
/* has_truth is set to 0 when no truth was given; truth_error is then left untouched. */
RDINV_API rdinv_status rdinv_result_info(const rdinv_result* r, double* objective, int* evaluations,
                                         int* total_evaluations, int* iterations, int* has_truth,
                                         double* truth_error);
RDINV_API rdinv_status rdinv_result_shape(const rdinv_result* r, int* N, int* n);
RDINV_API rdinv_status rdinv_result_coefficients(const rdinv_result* r, double* h);
RDINV_API const char* rdinv_result_stop_reason(const rdinv_result* r);
RDINV_API rdinv_status rdinv_result_history(const rdinv_result* r, size_t* count, int* evals, double* best);
/* recovered.csv, summary.txt, history.csv, plot_mu<k>.csv */
RDINV_API rdinv_status rdinv_result_write(const rdinv_result* r, const char* dir);

/* ---- basis and coefficient files ---- */

RDINV_API rdinv_status rdinv_basis_sample(int n, double lo, double hi, uint64_t seed, double* h);
/* Value at x of the expansion mapped onto [a, b]. */
RDINV_API rdinv_status rdinv_basis_eval(int n, const double* h, double a, double b, double x, double* value);
RDINV_API rdinv_status rdinv_recovery_error(int n, int N, const double* truth, const double* recovered, double a,
                                            double b, double* out);
RDINV_API rdinv_status rdinv_coefficients_write(const char* path, int N, int n, const double* h);
/* Two-call pattern: with h = NULL only N and n are reported. Otherwise h
 * must hold capacity >= N (n+1) entries. */
RDINV_API rdinv_status rdinv_coefficients_read(const char* path, int* N, int* n, double* h, size_t capacity);
/* plot_mu<k>.csv files (x, truth, recovered) on 201 points; truth may be NULL. */
RDINV_API rdinv_status rdinv_write_plot_data(int n, int N, const double* truth, const double* recovered, double a,
                                             double b, const char* dir);

/* ---- counter-examples ---- */

RDINV_API rdinv_status rdinv_counterexample_scaled_roots(int N, const double* roots, size_t nroots, double tau,
                                                         double a, double b, double D, double T, int M, int K,
                                                         rdinv_report** out);
/* Twin with reflected coefficients; p must be Neumann with symmetric
 * initial conditions and g. */
RDINV_API rdinv_status rdinv_counterexample_symmetry(const rdinv_problem* p, int M, int K, rdinv_report** out);
RDINV_API rdinv_status rdinv_counterexample_time_dependent(double D, double T, int K, rdinv_report** out);
RDINV_API rdinv_status rdinv_counterexample_unknown_initial(double D, double rho, double T, int M, int K,
                                                            rdinv_report** out);
RDINV_API void rdinv_report_destroy(rdinv_report* r);
RDINV_API rdinv_status rdinv_report_passed(const rdinv_report* r, int* passed);
RDINV_API const char* rdinv_report_text(const rdinv_report* r);
RDINV_API rdinv_status rdinv_report_claim_count(const rdinv_report* r, size_t* count);
/* name points into the report and lives as long as it does. */
RDINV_API rdinv_status rdinv_report_claim(const rdinv_report* r, size_t i, const char** name, double* measured,
                                          double* threshold, int* lower_bound, int* passed);
RDINV_API rdinv_status rdinv_report_write_csv(const rdinv_report* r, const char* path);

#ifdef __cplusplus
}
#endif

#endif
