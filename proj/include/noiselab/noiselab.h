/* C interface to noiselab: Schreier-graph random walks, spectra, Boolean
 * function influences, noise covariance bounds, exclusion splits and Monte
 * Carlo estimates.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call that can fail returns nl_status; on failure nl_last_error()
 * holds a message for the calling thread.
 *
 * Array outputs follow one pattern: pass (out, capacity, &count). count is
 * always set to the required length. With out == NULL the call only reports
 * the length; with capacity < count it returns NL_ERR_BUFFER_TOO_SMALL.
 * Strings count their terminating NUL. */
#ifndef NOISELAB_H
#define NOISELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(NOISELAB_BUILDING_LIBRARY)
#define NL_API __attribute__((visibility("default")))
#else
#define NL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nl_status {
  NL_OK = 0,
  NL_ERR_INVALID_ARGUMENT = 1,
  NL_ERR_VALIDATION = 2,
  NL_ERR_SIZE_LIMIT = 3,
  NL_ERR_NUMERIC = 4,
  NL_ERR_IO = 5,
  NL_ERR_BUFFER_TOO_SMALL = 6,
  NL_ERR_INTERNAL = 7
} nl_status;

typedef struct nl_graph nl_graph;
typedef struct nl_spectrum nl_spectrum;
typedef struct nl_function nl_function;
typedef struct nl_layered nl_layered;

NL_API const char* nl_version(void);
NL_API const char* nl_last_error(void);
NL_API const char* nl_status_name(nl_status status);

/* ---- graphs ----------------------------------------------------------- */

/* torus:m=,n= | hypercube:n= | johnson:n=,m= | sym:n= | custom:path=FILE.
 * max_states == 0 selects the default cap. */
NL_API nl_status nl_graph_from_spec(const char* spec, size_t max_states, nl_graph** out);
/* images: count generators, each a permutation of [0, size), row-major. */
NL_API nl_status nl_graph_custom(size_t size, size_t count, const uint32_t* images,
                                 int auto_close_inverses, int allow_disconnected,
                                 nl_graph** out);
NL_API void nl_graph_free(nl_graph* g);
NL_API size_t nl_graph_size(const nl_graph* g);
NL_API size_t nl_graph_degree(const nl_graph* g);
NL_API nl_status nl_graph_describe(const nl_graph* g, char* buf, size_t capacity, size_t* count);
NL_API nl_status nl_graph_state_label(const nl_graph* g, uint32_t state, char* buf,
                                      size_t capacity, size_t* count);
NL_API nl_status nl_graph_generator_label(const nl_graph* g, size_t u, char* buf,
                                          size_t capacity, size_t* count);
NL_API nl_status nl_graph_generator_image(const nl_graph* g, size_t u, uint32_t* out,
                                          size_t capacity, size_t* count);
/* Paired inverse index, or -1 when the generator has no inverse in the set. */
NL_API nl_status nl_graph_generator_inverse(const nl_graph* g, size_t u, int64_t* inverse);
NL_API nl_status nl_graph_to_json(const nl_graph* g, char* buf, size_t capacity, size_t* count);

typedef struct nl_validation {
  int inverse_closed;
  int connected;
  int regular;
  int undirected;
  size_t degree;
  size_t failures;
} nl_validation;

NL_API nl_status nl_graph_validate(const nl_graph* g, nl_validation* out);
/* Newline-separated failure messages from nl_graph_validate. */
NL_API nl_status nl_graph_validation_messages(const nl_graph* g, char* buf, size_t capacity,
                                              size_t* count);

/* ---- spectrum --------------------------------------------------------- */

/* grouping_tolerance <= 0 selects 1e-8 * max(1, lambda_max). */
NL_API nl_status nl_spectrum_decompose(const nl_graph* g, double grouping_tolerance,
                                       nl_spectrum** out);
NL_API void nl_spectrum_free(nl_spectrum* s);
NL_API size_t nl_spectrum_size(const nl_spectrum* s);
NL_API double nl_spectrum_gap(const nl_spectrum* s);
NL_API double nl_spectrum_relaxation_time(const nl_spectrum* s);
NL_API double nl_spectrum_grouping_tolerance(const nl_spectrum* s);
NL_API nl_status nl_spectrum_eigenvalues(const nl_spectrum* s, double* out, size_t capacity,
                                         size_t* count);
/* Eigenvector j scaled to unit uniform norm (psi_0 == 1). */
NL_API nl_status nl_spectrum_vector(const nl_spectrum* s, size_t j, double* out,
                                    size_t capacity, size_t* count);
/* Eigenspace index of every eigenvector. */
NL_API nl_status nl_spectrum_groups(const nl_spectrum* s, size_t* out, size_t capacity,
                                    size_t* count);
NL_API nl_status nl_spectrum_to_csv(const nl_spectrum* s, char* buf, size_t capacity,
                                    size_t* count);
NL_API nl_status nl_spectrum_to_json(const nl_spectrum* s, int with_vectors, char* buf,
                                     size_t capacity, size_t* count);

typedef struct nl_rotation_row {
  size_t group;
  double eigenvalue;
  size_t dimension;
  double max_gram_error;
  double max_projection_residual;
  int pass;
} nl_rotation_row;

NL_API nl_status nl_rotation_check(const nl_spectrum* s, const nl_graph* g, size_t u,
                                   double tol, nl_rotation_row* rows, size_t capacity,
                                   size_t* count, int* all_pass);

/* ---- Boolean functions ------------------------------------------------ */

/* constant:c= | dictator:i= | parity | majority | tribes:l=,k= | slice:m= |
 * fixes:i=,j= | FILE.json */
NL_API nl_status nl_function_from_spec(const nl_graph* g, const char* spec, nl_function** out);
NL_API nl_status nl_function_from_values(const uint8_t* values, size_t size, const char* name,
                                         nl_function** out);
NL_API void nl_function_free(nl_function* f);
NL_API size_t nl_function_size(const nl_function* f);
NL_API nl_status nl_function_name(const nl_function* f, char* buf, size_t capacity,
                                  size_t* count);
NL_API nl_status nl_function_values(const nl_function* f, uint8_t* out, size_t capacity,
                                    size_t* count);
NL_API nl_status nl_function_to_json(const nl_function* f, char* buf, size_t capacity,
                                     size_t* count);
NL_API nl_status nl_function_mean_variance(const nl_function* f, double* mean,
                                           double* variance);

typedef struct nl_influence_summary {
  size_t size;
  double total;
  double sum_of_squares;
} nl_influence_summary;

/* counts[u] = #{w : f(w) != f(w_u)}; influences[u] = counts[u] / size.
 * Either array may be NULL. */
NL_API nl_status nl_influence_profile(const nl_graph* g, const nl_function* f,
                                      uint64_t* counts, double* influences, size_t capacity,
                                      size_t* count, nl_influence_summary* summary);

NL_API nl_status nl_fourier(const nl_spectrum* s, const nl_function* f, double* out,
                            size_t capacity, size_t* count);

/* ---- noise ------------------------------------------------------------ */

NL_API nl_status nl_exact_covariance(const nl_spectrum* s, const nl_function* f, double t,
                                     double* out);
NL_API nl_status nl_low_frequency_weight(const nl_spectrum* s, const nl_function* f,
                                         double lambda, double* out);

typedef struct nl_bound_report {
  double r;
  double lambda;
  double T;
  double lhs;
  double rhs_low_freq_term;
  double rhs_tail_term;
  double rhs;
  double slack;
} nl_bound_report;

NL_API nl_status nl_bks_bound(double lambda1, double rho, double influence_sq_mean,
                              double variance, double r, double lambda, double T,
                              nl_bound_report* out);
NL_API nl_status nl_evaluate_bound(const nl_spectrum* s, const nl_graph* g,
                                   const nl_function* f, double rho, double r, double lambda,
                                   double T, nl_bound_report* out);
/* NULL r or lambda grids select the defaults: r in {0.05, ..., 0.95} and
 * lambda = lambda_1 * 2^k for k = -3..6. */
NL_API nl_status nl_optimize_bound(const nl_spectrum* s, const nl_graph* g,
                                   const nl_function* f, double rho, const double* r,
                                   size_t r_count, const double* lambda, size_t lambda_count,
                                   const double* T, size_t T_count, unsigned threads,
                                   nl_bound_report* out, size_t* evaluated);

typedef struct nl_eigenspace_row {
  size_t group;
  double eigenvalue;
  size_t dimension;
  double lhs;
  double rhs;
  double abs_error;
  int pass;
} nl_eigenspace_row;

NL_API nl_status nl_eigenspace_identity(const nl_spectrum* s, const nl_graph* g,
                                        const nl_function* f, double tol,
                                        nl_eigenspace_row* rows, size_t capacity,
                                        size_t* count, int* all_pass);

typedef struct nl_per_vector {
  double eigenvalue;
  double eigen_residual;
  double norm;
  double coefficient;
  double lhs;
  double rhs;
  int equal;
} nl_per_vector;

/* projections (may be NULL) receives <L_u f, psi> for every generator. */
NL_API nl_status nl_per_vector_identity(const nl_graph* g, const nl_function* f,
                                        const double* psi, size_t psi_size, double tol,
                                        nl_per_vector* out, double* projections,
                                        size_t capacity, size_t* count);

/* Parity character (-1)^{sum_{k in mask} w_k} on torus(2,n)/hypercube(n). */
NL_API nl_status nl_hypercube_character(const nl_graph* g, uint32_t mask, double* values,
                                        size_t capacity, size_t* count, double* eigenvalue);

/* cov[i] = Cov at t = epsilons[i] * T; low_freq[i] = weight below ks[i] / T. */
NL_API nl_status nl_sensitivity_profile(const nl_spectrum* s, const nl_function* f, double T,
                                        const double* epsilons, size_t epsilon_count,
                                        double* cov, const double* ks, size_t k_count,
                                        double* low_freq);

/* ---- log-Sobolev and hypercontractivity ------------------------------- */

typedef struct nl_ls_options {
  int restarts;
  int max_iters;
  double tol;
  uint64_t seed;
  unsigned threads;
} nl_ls_options;

NL_API void nl_ls_options_default(nl_ls_options* out);

typedef struct nl_ls_estimate {
  double rho_hat;
  double lambda1;
  double covariance_form_at_witness; /* NaN when the witness is constant */
  int restarts_used;
  int converged;
  int from_linear_limit;
} nl_ls_estimate;

/* minimizer (may be NULL) receives the witness function. */
NL_API nl_status nl_estimate_log_sobolev(const nl_graph* g, const nl_spectrum* s,
                                         const nl_ls_options* options, nl_ls_estimate* out,
                                         double* minimizer, size_t capacity, size_t* count);
NL_API nl_status nl_log_sobolev_ratio(const nl_graph* g, const double* f, size_t size,
                                      double* out);

typedef enum nl_rho_source {
  NL_RHO_USER = 0,
  NL_RHO_FAMILY_BOUND = 1,
  NL_RHO_NUMERICAL = 2
} nl_rho_source;

typedef struct nl_rho_choice {
  double rho;
  nl_rho_source source;
  int has_estimate;
  nl_ls_estimate estimate;
} nl_rho_choice;

/* user_rho may be NULL; options may be NULL for defaults. */
NL_API nl_status nl_resolve_rho(const nl_graph* g, const nl_spectrum* s,
                                const double* user_rho, int use_family_bound,
                                const nl_ls_options* options, nl_rho_choice* out);
/* 4 pi^2 / (5 m^2 n) on tori; NL_ERR_INVALID_ARGUMENT for other families. */
NL_API nl_status nl_family_rho_bound(const nl_graph* g, double* out);

/* p = 1 + e^{-2 rho t}; lhs = ||H_t f||_2, rhs = ||f||_p. */
NL_API nl_status nl_hypercontractivity(const nl_spectrum* s, const double* f, size_t size,
                                       double t, double rho, double* p, double* lhs,
                                       double* rhs);

/* ---- exclusion -------------------------------------------------------- */

/* max_work <= 0 selects the default budget on sum_m C(n,m)^3. */
NL_API nl_status nl_layered_build(int n, unsigned threads, double max_work, nl_layered** out);
NL_API void nl_layered_free(nl_layered* lw);
NL_API int nl_layered_n(const nl_layered* lw);

typedef struct nl_level_row {
  int m;
  double p;
  double mean;
  double variance;
} nl_level_row;

NL_API nl_status nl_layered_levels(const nl_layered* lw, const nl_function* f,
                                   nl_level_row* rows, size_t capacity, size_t* count);

typedef struct nl_split {
  double t;
  double within;
  double between;
  double total;
} nl_split;

NL_API nl_status nl_layered_split(const nl_layered* lw, const nl_function* f, double t,
                                  nl_split* out);
NL_API nl_status nl_layered_direct_covariance(const nl_layered* lw, const nl_function* f,
                                              double t, double* out);
NL_API nl_status nl_layered_level_mean_variance(const nl_layered* lw, const nl_function* f,
                                                double* out);

typedef struct nl_slice_influence_row {
  int m;
  int i;
  int j;
  double influence;
} nl_slice_influence_row;

typedef struct nl_transposition_influence {
  int i;
  int j;
  double mixture;
  double direct;
} nl_transposition_influence;

/* rows: one per (m, (ij)); totals: one per (ij). Either may be NULL. */
NL_API nl_status nl_slice_influences(const nl_layered* lw, const nl_function* f,
                                     nl_slice_influence_row* rows, size_t capacity,
                                     size_t* count, nl_transposition_influence* totals,
                                     size_t totals_capacity, size_t* totals_count,
                                     double* max_mixture_error);
NL_API nl_status nl_coordinate_influences(const nl_layered* lw, const nl_function* f,
                                          double* out, size_t capacity, size_t* count);

typedef struct nl_good_slices {
  double alpha;
  double sum_sq_influence;
  double sum_influence;
  double threshold;
  double probability;
  double bound;
  double bound_sum_form;
  int bound_holds;
  double transposition_sum_sq;
  double transposition_limit;
} nl_good_slices;

/* members receives the good levels; level_sums (n+1 entries, may be NULL)
 * the per-level sums of squared slice influences. */
NL_API nl_status nl_good_slice_set(const nl_layered* lw, const nl_function* f, double alpha,
                                   nl_good_slices* out, int* members, size_t capacity,
                                   size_t* count, double* level_sums);

typedef struct nl_slice_bound {
  int m;
  int applicable;
  double C;
  double epsilon;
  double delta;
  double lambda1;
  double rho;
  double nominal_lambda1;
  double nominal_rho_order;
  double slice_influence_sq;
  int influence_hypothesis;
  double lhs;
  double rhs;
  double best_r;
  double closed_form;
  double alpha;
  double chain_cov;
  double chain_middle;
  double chain_upper;
  int holds;
} nl_slice_bound;

NL_API nl_status nl_slice_bound_check(const nl_layered* lw, const nl_function* f, int m,
                                      double C, double epsilon, double delta, double alpha,
                                      const nl_ls_options* options, nl_slice_bound* out);

/* ---- simulation ------------------------------------------------------- */

typedef struct nl_sim_config {
  uint64_t samples;
  double t;
  uint64_t seed;
  int antithetic;
  int exponential_gaps; /* 0: Poisson jump count, 1: summed exp(1) gaps */
  unsigned threads;
} nl_sim_config;

typedef struct nl_cov_estimate {
  double mean;
  double std_error;
  uint64_t samples;
  uint64_t seed;
  double product_mean;
  double pooled_mean;
} nl_cov_estimate;

NL_API void nl_sim_config_default(nl_sim_config* out);
NL_API nl_status nl_empirical_covariance(const nl_graph* g, const nl_function* f,
                                         const nl_sim_config* cfg, nl_cov_estimate* out);
NL_API nl_status nl_empirical_exclusion_covariance(int n, const nl_function* f,
                                                   const nl_sim_config* cfg,
                                                   nl_cov_estimate* out);
/* One walk from x0 using substream (seed, stream). */
NL_API nl_status nl_simulate_walk(const nl_graph* g, uint32_t x0, double t, uint64_t seed,
                                  uint64_t stream, int exponential_gaps, uint32_t* out);
NL_API nl_status nl_end_state_counts(const nl_graph* g, uint32_t x0, const nl_sim_config* cfg,
                                     uint64_t* out, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif
