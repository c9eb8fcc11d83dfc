/* fairgm: fairness-aware estimation of sparse graphical models.
 *
 * C interface over the solver core. All matrices cross this boundary as
 * row-major double buffers; handles are opaque and freed with the matching
 * *_free call. Functions return FAIRGM_OK or an error code, with a
 * human-readable message available from fairgm_last_error() (thread-local).
 */
#ifndef FAIRGM_H
#define FAIRGM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fairgm_status {
    FAIRGM_OK = 0,
    FAIRGM_ERROR_INVALID_ARGUMENT = 1,
    FAIRGM_ERROR_NUMERICAL = 2,
    FAIRGM_ERROR_NOT_POSITIVE_DEFINITE = 3,
    FAIRGM_ERROR_UNSUPPORTED = 4,
    FAIRGM_ERROR_INTERNAL = 5
} fairgm_status;

typedef enum fairgm_model {
    FAIRGM_MODEL_GLASSO = 0,
    FAIRGM_MODEL_COVGRAPH = 1,
    FAIRGM_MODEL_BINNET = 2
} fairgm_model;

typedef enum fairgm_penalty {
    FAIRGM_PENALTY_SQUARE = 0,
    FAIRGM_PENALTY_EXP = 1,
    FAIRGM_PENALTY_ABS = 2
} fairgm_penalty;

/* Solver hyperparameters. Initialize with fairgm_config_init and override
 * fields as needed. */
typedef struct fairgm_config {
    double lambda;      /* l1 weight, >= 0 */
    double tau;         /* CovGraph log-det weight, > 0 */
    double gamma;       /* convexification weight; used when gamma_auto == 0 */
    int gamma_auto;     /* nonzero: derive gamma (0 for CovGraph, estimated for BinNet) */
    double ell0;        /* initial prox parameter */
    double ell_growth;  /* line-search multiplier, > 1 */
    double ell_shrink;  /* between-iteration decay, > 0 */
    double eps;         /* stationarity tolerance */
    long max_iter;      /* iteration cap */
    int penalty;        /* fairgm_penalty */
    int raw_grad_stop;  /* nonzero: stop standard fits on the raw gradient norm */
    uint64_t seed;
    int threads;        /* worker cap; 0 = hardware, bounded by FAIRGM_THREADS */
} fairgm_config;

void fairgm_config_init(fairgm_config* cfg);

typedef struct fairgm_dataset fairgm_dataset;
typedef struct fairgm_fit fairgm_fit;
typedef struct fairgm_truth fairgm_truth;

const char* fairgm_version(void);
/* Message for the most recent error on this thread; "" when none. */
const char* fairgm_last_error(void);

/* The library's stream-splitting rule: the sampler for sensitive group k
 * (1-based stream k) runs on fairgm_split_seed(seed, k). Exposed so drivers
 * can reproduce multi-group datasets from one base seed. */
uint64_t fairgm_split_seed(uint64_t seed, uint64_t stream);

/* ---- datasets ------------------------------------------------------- */

/* data: n x p row-major; labels: n group labels (any integers; remapped to
 * contiguous ids). require_binary rejects entries outside {0, 1}. */
fairgm_status fairgm_dataset_create(const double* data, const int64_t* labels, int64_t n,
                                    int64_t p, int require_binary, fairgm_dataset** out);
void fairgm_dataset_free(fairgm_dataset* ds);
int64_t fairgm_dataset_rows(const fairgm_dataset* ds);
int64_t fairgm_dataset_cols(const fairgm_dataset* ds);
int fairgm_dataset_groups(const fairgm_dataset* ds);
int64_t fairgm_dataset_group_size(const fairgm_dataset* ds, int k);
int fairgm_dataset_is_binary(const fairgm_dataset* ds);

/* ---- fitting --------------------------------------------------------- */

/* fair == 0 fits the standard pooled estimator (plus local graphs for the
 * disparity report when K >= 2); fair != 0 runs the multi-objective fair
 * estimator. */
fairgm_status fairgm_fit_run(fairgm_model model, const fairgm_dataset* ds,
                             const fairgm_config* cfg, int fair, fairgm_fit** out);
void fairgm_fit_free(fairgm_fit* fit);

int fairgm_fit_p(const fairgm_fit* fit);
int fairgm_fit_num_objectives(const fairgm_fit* fit);
int fairgm_fit_converged(const fairgm_fit* fit);
int fairgm_fit_is_pd(const fairgm_fit* fit);
long fairgm_fit_iterations(const fairgm_fit* fit);
double fairgm_fit_f1(const fairgm_fit* fit);
double fairgm_fit_delta_total(const fairgm_fit* fit);
double fairgm_fit_gamma(const fairgm_fit* fit);
double fairgm_fit_residual(const fairgm_fit* fit);
double fairgm_fit_runtime_seconds(const fairgm_fit* fit);
fairgm_status fairgm_fit_theta(const fairgm_fit* fit, double* out /* p*p */);
int fairgm_fit_num_locals(const fairgm_fit* fit);
fairgm_status fairgm_fit_local_theta(const fairgm_fit* fit, int k, double* out /* p*p */);
/* errors and pairwise hold K entries each; any pointer may be NULL. */
fairgm_status fairgm_fit_disparity(const fairgm_fit* fit, double* errors, double* pairwise,
                                   double* total, double* spread);

/* Per-iteration trace. A row is
 *   iter, F_1..F_M, delta_total, rho_1..rho_M, ell, residual, step_norm
 * so out must hold 2*M + 5 doubles (M = fairgm_fit_num_objectives). Row 0 is
 * the initial iterate. */
long fairgm_fit_trace_len(const fairgm_fit* fit);
fairgm_status fairgm_fit_trace_row(const fairgm_fit* fit, long row, double* out,
                                   int64_t out_len);

/* ---- synthetic ground truth and samplers ----------------------------- */

fairgm_status fairgm_gen_block_covariances(int p, int q, int k, int reset_per_group,
                                           uint64_t seed, fairgm_truth** out);
fairgm_status fairgm_gen_hub_networks(int p, int h, int k, uint64_t seed, fairgm_truth** out);
void fairgm_truth_free(fairgm_truth* gt);
int fairgm_truth_groups(const fairgm_truth* gt);
int fairgm_truth_p(const fairgm_truth* gt);
fairgm_status fairgm_truth_matrix(const fairgm_truth* gt, int k, double* out /* p*p */);

fairgm_status fairgm_sample_mvn(const double* sigma, int p, int64_t n, uint64_t seed,
                                double* out /* n*p */);
fairgm_status fairgm_gibbs_sample_ising(const double* theta, int p, int64_t n,
                                        int64_t burn_in, int64_t thinning, uint64_t seed,
                                        double* out /* n*p */);
fairgm_status fairgm_exact_ising_distribution(const double* theta, int p,
                                              double* out /* 2^p */);

/* Inverse of a symmetric positive definite matrix (precision from covariance
 * ground truth). */
fairgm_status fairgm_invert_spd(const double* m, int p, double* out);

/* ---- evaluation ------------------------------------------------------ */

/* Proportion of correctly estimated edges at threshold lambda. With
 * literal_variant == 0 an estimated edge counts when |est| >= lambda; nonzero
 * keeps the signed test est >= lambda. *defined is 0 when the truth has no
 * edges at this level (value is then NaN). */
fairgm_status fairgm_pcee(const double* est, const double* truth, int p, double lambda,
                          int literal_variant, double* value, int* defined);

/* Trade-off percentages; positive = the fair run improved the quantity.
 * *_defined is 0 when the corresponding baseline is zero. */
fairgm_status fairgm_compare_runs(double f1_standard, double f1_fair, double delta_standard,
                                  double delta_fair, double* pct_f1, int* pct_f1_defined,
                                  double* pct_delta, int* pct_delta_defined);

#ifdef __cplusplus
}
#endif

#endif /* FAIRGM_H */
