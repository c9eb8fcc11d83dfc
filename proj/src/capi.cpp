#include "fairgm/fairgm.h"

#include "fairgm/fit_run.hpp"
#include "fairgm/rng.hpp"
#include "fairgm/synth.hpp"

#include <memory>
#include <string>
#include <vector>

namespace {

thread_local std::string g_last_error;

fairgm_status set_error(fairgm_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

template <typename Fn>
fairgm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FAIRGM_OK;
    } catch (const fairgm::InvalidArgument& e) {
        return set_error(FAIRGM_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const fairgm::NotPositiveDefinite& e) {
        return set_error(FAIRGM_ERROR_NOT_POSITIVE_DEFINITE, e.what());
    } catch (const fairgm::UnsupportedPenaltyGradient& e) {
        return set_error(FAIRGM_ERROR_UNSUPPORTED, e.what());
    } catch (const fairgm::NumericalError& e) {
        return set_error(FAIRGM_ERROR_NUMERICAL, e.what());
    } catch (const std::exception& e) {
        return set_error(FAIRGM_ERROR_INTERNAL, e.what());
    } catch (...) {
        return set_error(FAIRGM_ERROR_INTERNAL, "unknown error");
    }
}

fairgm::Model to_model(fairgm_model m) {
    switch (m) {
        case FAIRGM_MODEL_GLASSO: return fairgm::Model::GLasso;
        case FAIRGM_MODEL_COVGRAPH: return fairgm::Model::CovGraph;
        case FAIRGM_MODEL_BINNET: return fairgm::Model::BinNet;
    }
    throw fairgm::InvalidArgument("unknown model id");
}

fairgm::FitConfig to_config(const fairgm_config* cfg) {
    if (!cfg) throw fairgm::InvalidArgument("config must not be NULL");
    fairgm::FitConfig out;
    out.lambda = cfg->lambda;
    out.tau = cfg->tau;
    out.gamma = cfg->gamma;
    out.gamma_auto = cfg->gamma_auto != 0;
    out.ell0 = cfg->ell0;
    out.ell_growth = cfg->ell_growth;
    out.ell_shrink = cfg->ell_shrink;
    out.eps = cfg->eps;
    out.max_iter = cfg->max_iter;
    switch (cfg->penalty) {
        case FAIRGM_PENALTY_SQUARE: out.penalty = fairgm::Penalty::Square; break;
        case FAIRGM_PENALTY_EXP: out.penalty = fairgm::Penalty::Exp; break;
        case FAIRGM_PENALTY_ABS: out.penalty = fairgm::Penalty::Abs; break;
        default: throw fairgm::InvalidArgument("unknown penalty id");
    }
    out.stop_rule = cfg->raw_grad_stop ? fairgm::StopRule::RawGradient
                                       : fairgm::StopRule::CompositeGradMap;
    out.seed = cfg->seed;
    out.threads = cfg->threads;
    out.validate();
    return out;
}

fairgm::Matrix from_buffer(const double* data, long rows, long cols) {
    if (!data) throw fairgm::InvalidArgument("matrix buffer must not be NULL");
    fairgm::Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
    return m;
}

void to_buffer(const fairgm::Matrix& m, double* out) {
    if (!out) throw fairgm::InvalidArgument("output buffer must not be NULL");
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

}  // namespace

struct fairgm_dataset {
    fairgm::GroupedDataset ds;
};

struct fairgm_fit {
    fairgm::FitRun run;
};

struct fairgm_truth {
    fairgm::synth::GroundTruth gt;
};

extern "C" {

const char* fairgm_version(void) { return "0.1.0"; }

const char* fairgm_last_error(void) { return g_last_error.c_str(); }

uint64_t fairgm_split_seed(uint64_t seed, uint64_t stream) {
    return fairgm::split_seed(seed, stream);
}

void fairgm_config_init(fairgm_config* cfg) {
    if (!cfg) return;
    fairgm::FitConfig d;
    cfg->lambda = d.lambda;
    cfg->tau = d.tau;
    cfg->gamma = d.gamma;
    cfg->gamma_auto = d.gamma_auto ? 1 : 0;
    cfg->ell0 = d.ell0;
    cfg->ell_growth = d.ell_growth;
    cfg->ell_shrink = d.ell_shrink;
    cfg->eps = d.eps;
    cfg->max_iter = d.max_iter;
    cfg->penalty = FAIRGM_PENALTY_SQUARE;
    cfg->raw_grad_stop = 0;
    cfg->seed = 0;
    cfg->threads = 0;
}

fairgm_status fairgm_dataset_create(const double* data, const int64_t* labels, int64_t n,
                                    int64_t p, int require_binary, fairgm_dataset** out) {
    return guarded([&] {
        if (!labels || !out) throw fairgm::InvalidArgument("NULL argument");
        fairgm::Matrix raw = from_buffer(data, n, p);
        std::vector<long> labs(labels, labels + n);
        auto handle = std::make_unique<fairgm_dataset>();
        handle->ds = fairgm::validate_dataset(raw, labs, require_binary != 0);
        *out = handle.release();
    });
}

void fairgm_dataset_free(fairgm_dataset* ds) { delete ds; }

int64_t fairgm_dataset_rows(const fairgm_dataset* ds) { return ds ? ds->ds.n() : 0; }
int64_t fairgm_dataset_cols(const fairgm_dataset* ds) { return ds ? ds->ds.p() : 0; }
int fairgm_dataset_groups(const fairgm_dataset* ds) { return ds ? ds->ds.num_groups : 0; }

int64_t fairgm_dataset_group_size(const fairgm_dataset* ds, int k) {
    if (!ds || k < 0 || k >= ds->ds.num_groups) return -1;
    return ds->ds.group_sizes[k];
}

int fairgm_dataset_is_binary(const fairgm_dataset* ds) {
    return ds && ds->ds.binary ? 1 : 0;
}

fairgm_status fairgm_fit_run(fairgm_model model, const fairgm_dataset* ds,
                             const fairgm_config* cfg, int fair, fairgm_fit** out) {
    return guarded([&] {
        if (!ds || !out) throw fairgm::InvalidArgument("NULL argument");
        auto handle = std::make_unique<fairgm_fit>();
        handle->run = fairgm::run_fit(to_model(model), ds->ds, to_config(cfg), fair != 0);
        *out = handle.release();
    });
}

void fairgm_fit_free(fairgm_fit* fit) { delete fit; }

int fairgm_fit_p(const fairgm_fit* fit) {
    return fit ? static_cast<int>(fit->run.estimate.matrix.rows()) : 0;
}

int fairgm_fit_num_objectives(const fairgm_fit* fit) {
    if (!fit || fit->run.estimate.trace.empty()) return 0;
    return static_cast<int>(fit->run.estimate.trace.front().objectives.size());
}

int fairgm_fit_converged(const fairgm_fit* fit) {
    return fit && fit->run.estimate.converged ? 1 : 0;
}

int fairgm_fit_is_pd(const fairgm_fit* fit) { return fit && fit->run.estimate.is_pd ? 1 : 0; }

long fairgm_fit_iterations(const fairgm_fit* fit) {
    return fit ? fit->run.estimate.iterations : 0;
}

double fairgm_fit_f1(const fairgm_fit* fit) { return fit ? fit->run.f1_penalized : 0.0; }

double fairgm_fit_delta_total(const fairgm_fit* fit) {
    return fit ? fit->run.disparity.total : 0.0;
}

double fairgm_fit_gamma(const fairgm_fit* fit) { return fit ? fit->run.gamma_used : 0.0; }

double fairgm_fit_residual(const fairgm_fit* fit) {
    return fit ? fit->run.final_residual : 0.0;
}

double fairgm_fit_runtime_seconds(const fairgm_fit* fit) {
    return fit ? fit->run.runtime_seconds : 0.0;
}

fairgm_status fairgm_fit_theta(const fairgm_fit* fit, double* out) {
    return guarded([&] {
        if (!fit) throw fairgm::InvalidArgument("NULL fit");
        to_buffer(fit->run.estimate.matrix, out);
    });
}

int fairgm_fit_num_locals(const fairgm_fit* fit) {
    return fit ? fit->run.locals.num_groups() : 0;
}

fairgm_status fairgm_fit_local_theta(const fairgm_fit* fit, int k, double* out) {
    return guarded([&] {
        if (!fit) throw fairgm::InvalidArgument("NULL fit");
        if (k < 0 || k >= fit->run.locals.num_groups())
            throw fairgm::InvalidArgument("local index out of range");
        to_buffer(fit->run.locals.theta[k], out);
    });
}

fairgm_status fairgm_fit_disparity(const fairgm_fit* fit, double* errors, double* pairwise,
                                   double* total, double* spread) {
    return guarded([&] {
        if (!fit) throw fairgm::InvalidArgument("NULL fit");
        const auto& rep = fit->run.disparity;
        if (errors)
            for (long k = 0; k < rep.errors.size(); ++k) errors[k] = rep.errors[k];
        if (pairwise)
            for (long k = 0; k < rep.pairwise.size(); ++k) pairwise[k] = rep.pairwise[k];
        if (total) *total = rep.total;
        if (spread) *spread = rep.spread;
    });
}

long fairgm_fit_trace_len(const fairgm_fit* fit) {
    return fit ? static_cast<long>(fit->run.estimate.trace.size()) : 0;
}

fairgm_status fairgm_fit_trace_row(const fairgm_fit* fit, long row, double* out,
                                   int64_t out_len) {
    return guarded([&] {
        if (!fit || !out) throw fairgm::InvalidArgument("NULL argument");
        const auto& trace = fit->run.estimate.trace;
        if (row < 0 || row >= static_cast<long>(trace.size()))
            throw fairgm::InvalidArgument("trace row out of range");
        const auto& r = trace[row];
        const long m = r.objectives.size();
        if (out_len < 2 * m + 5) throw fairgm::InvalidArgument("trace buffer too small");
        long idx = 0;
        out[idx++] = static_cast<double>(r.iter);
        for (long k = 0; k < m; ++k) out[idx++] = r.objectives[k];
        out[idx++] = r.delta_total;
        for (long k = 0; k < m; ++k) out[idx++] = r.rho[k];
        out[idx++] = r.ell;
        out[idx++] = r.residual;
        out[idx++] = r.step_norm;
    });
}

fairgm_status fairgm_gen_block_covariances(int p, int q, int k, int reset_per_group,
                                           uint64_t seed, fairgm_truth** out) {
    return guarded([&] {
        if (!out) throw fairgm::InvalidArgument("NULL output");
        auto handle = std::make_unique<fairgm_truth>();
        handle->gt = fairgm::synth::gen_block_covariances(p, q, k, seed, reset_per_group);
        *out = handle.release();
    });
}

fairgm_status fairgm_gen_hub_networks(int p, int h, int k, uint64_t seed,
                                      fairgm_truth** out) {
    return guarded([&] {
        if (!out) throw fairgm::InvalidArgument("NULL output");
        auto handle = std::make_unique<fairgm_truth>();
        handle->gt = fairgm::synth::gen_hub_networks(p, h, k, seed);
        *out = handle.release();
    });
}

void fairgm_truth_free(fairgm_truth* gt) { delete gt; }

int fairgm_truth_groups(const fairgm_truth* gt) {
    return gt ? static_cast<int>(gt->gt.graphs.size()) : 0;
}

int fairgm_truth_p(const fairgm_truth* gt) { return gt ? gt->gt.p : 0; }

fairgm_status fairgm_truth_matrix(const fairgm_truth* gt, int k, double* out) {
    return guarded([&] {
        if (!gt) throw fairgm::InvalidArgument("NULL truth");
        if (k < 0 || k >= static_cast<int>(gt->gt.graphs.size()))
            throw fairgm::InvalidArgument("group index out of range");
        to_buffer(gt->gt.graphs[k], out);
    });
}

fairgm_status fairgm_sample_mvn(const double* sigma, int p, int64_t n, uint64_t seed,
                                double* out) {
    return guarded([&] {
        to_buffer(fairgm::synth::sample_mvn(from_buffer(sigma, p, p), n, seed), out);
    });
}

fairgm_status fairgm_gibbs_sample_ising(const double* theta, int p, int64_t n,
                                        int64_t burn_in, int64_t thinning, uint64_t seed,
                                        double* out) {
    return guarded([&] {
        to_buffer(fairgm::synth::gibbs_sample_ising(from_buffer(theta, p, p), n, burn_in,
                                                    thinning, seed),
                  out);
    });
}

fairgm_status fairgm_exact_ising_distribution(const double* theta, int p, double* out) {
    return guarded([&] {
        if (!out) throw fairgm::InvalidArgument("NULL output");
        const fairgm::Vector probs =
            fairgm::synth::exact_ising_distribution(from_buffer(theta, p, p));
        for (long i = 0; i < probs.size(); ++i) out[i] = probs[i];
    });
}

fairgm_status fairgm_invert_spd(const double* m, int p, double* out) {
    return guarded([&] {
        to_buffer(fairgm::models::inverse_spd(from_buffer(m, p, p)), out);
    });
}

fairgm_status fairgm_pcee(const double* est, const double* truth, int p, double lambda,
                          int literal_variant, double* value, int* defined) {
    return guarded([&] {
        if (!value) throw fairgm::InvalidArgument("NULL output");
        const auto res = fairgm::metrics::pcee(from_buffer(est, p, p),
                                               from_buffer(truth, p, p), lambda,
                                               literal_variant != 0);
        *value = res.value;
        if (defined) *defined = res.defined ? 1 : 0;
    });
}

fairgm_status fairgm_compare_runs(double f1_standard, double f1_fair, double delta_standard,
                                  double delta_fair, double* pct_f1, int* pct_f1_defined,
                                  double* pct_delta, int* pct_delta_defined) {
    return guarded([&] {
        fairgm::metrics::RunSummary std_run{f1_standard, delta_standard, 0.0};
        fairgm::metrics::RunSummary fair_run{f1_fair, delta_fair, 0.0};
        const auto rep = fairgm::metrics::compare_runs(std_run, fair_run);
        if (pct_f1) *pct_f1 = rep.pct_f1;
        if (pct_f1_defined) *pct_f1_defined = rep.pct_f1_defined ? 1 : 0;
        if (pct_delta) *pct_delta = rep.pct_delta;
        if (pct_delta_defined) *pct_delta_defined = rep.pct_delta_defined ? 1 : 0;
    });
}

}  // extern "C"
