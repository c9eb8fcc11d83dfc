// Acceptance suite: runs every criterion end to end and prints one pass/fail
// line per criterion. Exit status is the number of failed criteria.

#include "fairgm/fit_run.hpp"
#include "fairgm/prox_detail.hpp"
#include "fairgm/rng.hpp"
#include "fairgm/solver_ista.hpp"
#include "fairgm/solver_moo.hpp"
#include "fairgm/synth.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace fairgm;

namespace {

struct Criterion {
    int id;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Criterion> g_results;

void report(int id, bool pass, const std::string& detail, double seconds) {
    g_results.push_back({id, pass, detail, seconds});
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(),
                seconds);
    std::fflush(stdout);
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---- experiment bundles ------------------------------------------------

constexpr int kSeeds = 10;

// Solver configuration for the desk-scale quantitative runs. ell_growth = 2
// with no between-iteration decay keeps the prox parameter near the actual
// curvature, which the ill-conditioned block covariances need for the
// percentage comparisons to resolve at the 1% level.
FitConfig quantitative_config(double lambda) {
    FitConfig cfg;
    cfg.lambda = lambda;
    cfg.eps = 1e-7;
    cfg.max_iter = 120000;
    cfg.ell_growth = 2.0;
    cfg.ell_shrink = 1.0;
    return cfg;
}

struct SeedOutcome {
    double f1_std = 0, f1_fair = 0, delta_std = 0, delta_fair = 0;
    double pct_f1 = 0, pct_delta = 0;
    double pcee_gap_std = 0, pcee_gap_fair = 0;
    FairFit fair;                  // kept for criteria 4, 9, 10 (seed 1 only)
    std::vector<TraceRow> fair_trace;
};

GroupedDataset gaussian_dataset(const synth::GroundTruth& gt, const std::vector<long>& n,
                                std::uint64_t seed) {
    long total = 0;
    for (long nk : n) total += nk;
    Matrix x(total, gt.p);
    std::vector<long> labels(total);
    long row = 0;
    for (std::size_t g = 0; g < gt.graphs.size(); ++g) {
        x.middleRows(row, n[g]) = synth::sample_mvn(gt.graphs[g], n[g], split_seed(seed, g + 1));
        for (long i = 0; i < n[g]; ++i) labels[row + i] = static_cast<long>(g) + 1;
        row += n[g];
    }
    return validate_dataset(x, labels);
}

GroupedDataset ising_dataset(const synth::GroundTruth& gt, const std::vector<long>& n,
                             std::uint64_t seed) {
    long total = 0;
    for (long nk : n) total += nk;
    Matrix x(total, gt.p);
    std::vector<long> labels(total);
    long row = 0;
    for (std::size_t g = 0; g < gt.graphs.size(); ++g) {
        x.middleRows(row, n[g]) =
            synth::gibbs_sample_ising(gt.graphs[g], n[g], 10000, 100, split_seed(seed, g + 1));
        for (long i = 0; i < n[g]; ++i) labels[row + i] = static_cast<long>(g) + 1;
        row += n[g];
    }
    return validate_dataset(x, labels, true);
}

double pcee_gap(const Matrix& est, const std::vector<Matrix>& truths, double lambda) {
    double lo = 1e300, hi = -1e300;
    for (const auto& truth : truths) {
        const auto r = metrics::pcee(est, truth, lambda);
        if (!r.defined) return std::nan("");
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    return hi - lo;
}

// One quantitative cell: standard fit, fair fit (shared locals), trade-off
// percentages, and PCEE gaps against the per-group reference graphs.
SeedOutcome run_cell(Model model, const GroupedDataset& ds, const FitConfig& cfg,
                     const std::vector<Matrix>& reference, bool keep_fair) {
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    LocalSolutions locals = fit_locals(family, cfg);

    GraphEstimate std_est = fit_single_scope(family, -1, cfg);
    const DisparityReport std_rep =
        disparity_report(std_est.matrix, locals, cfg.penalty, family);
    FairFit fair = fit_fair(model, ds, cfg, std::move(locals));

    SeedOutcome out;
    out.f1_std = family.loss(std_est.matrix) + cfg.lambda * std_est.matrix.cwiseAbs().sum();
    out.f1_fair = family.loss(fair.estimate.matrix) +
                  cfg.lambda * fair.estimate.matrix.cwiseAbs().sum();
    out.delta_std = std_rep.total;
    out.delta_fair = fair.disparity.total;
    const auto cmp = metrics::compare_runs({out.f1_std, out.delta_std, 0},
                                           {out.f1_fair, out.delta_fair, 0});
    out.pct_f1 = cmp.pct_f1;
    out.pct_delta = cmp.pct_delta;
    out.pcee_gap_std = pcee_gap(std_est.matrix, reference, cfg.lambda);
    out.pcee_gap_fair = pcee_gap(fair.estimate.matrix, reference, cfg.lambda);
    out.fair_trace = fair.estimate.trace;
    if (keep_fair) out.fair = std::move(fair);
    return out;
}

std::vector<SeedOutcome> g_glasso;
std::vector<SeedOutcome> g_covgraph;
std::vector<SeedOutcome> g_binnet;

void run_glasso_bundle() {
    for (int seed = 1; seed <= kSeeds; ++seed) {
        auto gt = synth::gen_block_covariances(100, 5, 2, seed);
        auto ds = gaussian_dataset(gt, {1000, 1000}, seed);
        std::vector<Matrix> precision;
        for (const auto& sigma : gt.graphs) precision.push_back(models::inverse_spd(sigma));
        g_glasso.push_back(
            run_cell(Model::GLasso, ds, quantitative_config(0.01), precision, seed == 1));
        std::printf("  glasso seed %d: pct_f1=%+.3f%% pct_delta=%+.2f%% gap %.4f -> %.4f\n",
                    seed, g_glasso.back().pct_f1, g_glasso.back().pct_delta,
                    g_glasso.back().pcee_gap_std, g_glasso.back().pcee_gap_fair);
        std::fflush(stdout);
    }
}

void run_covgraph_bundle() {
    for (int seed = 1; seed <= kSeeds; ++seed) {
        auto gt = synth::gen_block_covariances(100, 5, 2, seed);
        auto ds = gaussian_dataset(gt, {1000, 1000}, seed);
        FitConfig cfg = quantitative_config(0.01);
        cfg.tau = 0.01;
        g_covgraph.push_back(run_cell(Model::CovGraph, ds, cfg, gt.graphs, false));
        std::printf("  covgraph seed %d: pct_f1=%+.3f%% pct_delta=%+.2f%%\n", seed,
                    g_covgraph.back().pct_f1, g_covgraph.back().pct_delta);
        std::fflush(stdout);
    }
}

void run_binnet_bundle() {
    for (int seed = 1; seed <= kSeeds; ++seed) {
        auto gt = synth::gen_hub_networks(50, 3, 2, seed);
        auto ds = ising_dataset(gt, {500, 1000}, seed);
        FitConfig cfg = quantitative_config(20.0);
        cfg.eps = 1e-2;
        cfg.max_iter = 60000;
        g_binnet.push_back(run_cell(Model::BinNet, ds, cfg, gt.graphs, false));
        std::printf("  binnet seed %d: pct_f1=%+.3f%% pct_delta=%+.2f%% gap %.4f -> %.4f\n",
                    seed, g_binnet.back().pct_f1, g_binnet.back().pct_delta,
                    g_binnet.back().pcee_gap_std, g_binnet.back().pcee_gap_fair);
        std::fflush(stdout);
    }
}

// ---- criteria ----------------------------------------------------------

// Central finite differences over the tied symmetric parameters.
Matrix fd_sym(const std::function<double(const Matrix&)>& f, const Matrix& at, double h) {
    const long p = at.rows();
    Matrix out(p, p);
    for (long j = 0; j < p; ++j) {
        for (long i = j; i < p; ++i) {
            Matrix dir = Matrix::Zero(p, p);
            dir(i, j) = 1.0;
            dir(j, i) = 1.0;
            out(i, j) = out(j, i) = (f(at + h * dir) - f(at - h * dir)) / (2.0 * h);
        }
    }
    return out;
}

Matrix tied_params(const Matrix& g) {
    Matrix out = g + g.transpose();
    out.diagonal() = g.diagonal();
    return out;
}

void criterion_1() {
    Timer timer;
    Rng rng = make_rng(4242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    int checked = 0;
    for (Model model : {Model::GLasso, Model::CovGraph, Model::BinNet}) {
        for (int inst = 0; inst < 20; ++inst) {
            const long p = 4, n = 16;
            Matrix x(n, p);
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < p; ++j)
                    x(i, j) = model == Model::BinNet ? (unif(rng) > 0 ? 1.0 : 0.0)
                                                     : unif(rng);
            std::vector<long> labels(n, 1);
            for (long i = n / 2; i < n; ++i) labels[i] = 2;
            auto ds = validate_dataset(x, labels, model == Model::BinNet);
            auto st = group_stats(ds);
            models::ModelFamily family(model, ds, st, 0.1);

            Matrix theta;
            if (model == Model::BinNet) {
                theta = Matrix::Zero(p, p);
                for (long a = 0; a < p; ++a)
                    for (long b = a; b < p; ++b) theta(a, b) = theta(b, a) = 0.4 * unif(rng);
            } else {
                Matrix a(p, p);
                for (long i = 0; i < p; ++i)
                    for (long j = 0; j < p; ++j) a(i, j) = unif(rng);
                theta = a * a.transpose() / double(p) + 0.4 * Matrix::Identity(p, p);
            }

            LocalSolutions locals;
            for (int k = 0; k < 2; ++k) {
                Matrix guess = theta + 0.05 * Matrix::Identity(p, p);
                locals.raw_loss.push_back(family.loss(guess, k));
                locals.theta.push_back(std::move(guess));
            }

            const Matrix fd_f1 =
                fd_sym([&](const Matrix& m) { return family.loss(m); }, theta, 1e-5);
            worst = std::max(worst, (fd_f1 - tied_params(family.grad(theta))).norm() /
                                        std::max(1.0, fd_f1.norm()));
            ++checked;
            for (Penalty pen : {Penalty::Square, Penalty::Exp}) {
                for (int k = 0; k < 2; ++k) {
                    const Matrix fd = fd_sym(
                        [&](const Matrix& m) {
                            return pairwise_disparity(m, k, pen, locals, family);
                        },
                        theta, 1e-5);
                    const Matrix an =
                        tied_params(disparity_grad(theta, k, pen, locals, family));
                    worst = std::max(worst, (fd - an).norm() / std::max(1.0, fd.norm()));
                    ++checked;
                }
            }
        }
    }
    const double sec = timer.seconds();
    const bool pass = worst < 1e-4 && sec < 10.0;
    report(1, pass,
           "gradient vs central differences: worst rel err " + std::to_string(worst) + " over " +
               std::to_string(checked) + " checks, tol 1e-4",
           sec);
}

void criterion_2() {
    Timer timer;
    auto gt = synth::gen_block_covariances(10, 2, 1, 3);
    auto ds = gaussian_dataset(gt, {200}, 3);
    FitConfig cfg;
    cfg.lambda = 0.02;
    cfg.eps = 1e-6;
    cfg.record_iterates = true;
    auto ista = fit_single(Model::GLasso, ds, cfg);
    auto moo = fit_moo_single(Model::GLasso, ds, cfg);
    bool pass = ista.iterates.size() == moo.estimate.iterates.size();
    double worst = 0.0;
    if (pass) {
        for (std::size_t i = 0; i < ista.iterates.size(); ++i)
            worst = std::max(
                worst, (ista.iterates[i] - moo.estimate.iterates[i]).cwiseAbs().maxCoeff());
        pass = worst <= 1e-8;
    }
    const double sec = timer.seconds();
    report(2, pass && sec < 5.0,
           "M=1 reduction: " + std::to_string(ista.iterates.size()) +
               " iterates, max deviation " + std::to_string(worst) + ", tol 1e-8",
           sec);
}

void criterion_3() {
    Timer timer;
    Rng rng = make_rng(9001);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.5, 3.0);
    double worst_diff = 0.0, worst_gap = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Matrix theta(1, 1), g1(1, 1), g2(1, 1);
        theta << unif(rng);
        g1 << unif(rng);
        g2 << unif(rng);
        const double ell = pos(rng);
        const double lambda = trial % 3 == 0 ? 0.0 : 0.3 * pos(rng);
        auto sol = solve_subproblem(theta, {g1, g2}, ell, lambda);

        double best = -1e300;
        for (double r = 0.0; r <= 1.0 + 1e-12; r += 1e-4) {
            const double combo = r * g1(0, 0) + (1.0 - r) * g2(0, 0);
            const double x = theta(0, 0) - combo / ell;
            const double y =
                std::abs(x) > lambda / ell ? (x > 0 ? x - lambda / ell : x + lambda / ell) : 0.0;
            const double omega = lambda * std::abs(y) + 0.5 * ell * (x - y) * (x - y) -
                                 combo * combo / (2.0 * ell) - lambda * std::abs(theta(0, 0));
            best = std::max(best, omega);
        }
        worst_diff = std::max(worst_diff, std::abs(sol.omega - best));
        worst_gap = std::max(worst_gap,
                             (sol.varphi - sol.omega) / (1.0 + std::abs(sol.omega)));
    }
    const bool pass = worst_diff < 1e-6 && worst_gap <= 1e-6;
    report(3, pass,
           "dual vs 1e-4 grid: worst |diff| " + std::to_string(worst_diff) +
               ", worst rel gap " + std::to_string(worst_gap),
           timer.seconds());
}

void criterion_4() {
    Timer timer;
    long violations = 0;
    double worst = 0.0;
    for (const auto& outcome : g_glasso) {
        const auto& trace = outcome.fair_trace;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            for (long k = 0; k < trace[i].objectives.size(); ++k) {
                const double inc = trace[i].objectives[k] - trace[i - 1].objectives[k];
                worst = std::max(worst, inc);
                if (inc > 1e-10) ++violations;
            }
        }
    }
    report(4, violations == 0,
           "multi-objective descent: max per-step increase " + std::to_string(worst) +
               " over all 10 fair GLasso traces, tol 1e-10",
           timer.seconds());
}

void criterion_5() {
    Timer timer;
    int hits = 0;
    for (const auto& o : g_glasso)
        if (o.pct_delta >= 80.0 && std::abs(o.pct_f1) <= 1.0) ++hits;
    report(5, hits >= 8,
           "GLasso simulation: delta cut >= 80% and |%F1| <= 1% in " + std::to_string(hits) +
               "/10 seeds (need >= 8)",
           timer.seconds());
}

void criterion_6() {
    Timer timer;
    int cov_hits = 0, bin_hits = 0;
    for (const auto& o : g_covgraph)
        if (o.pct_delta >= 80.0 && std::abs(o.pct_f1) <= 2.0) ++cov_hits;
    for (const auto& o : g_binnet)
        if (o.pct_delta >= 80.0 && std::abs(o.pct_f1) <= 2.0) ++bin_hits;
    report(6, cov_hits >= 8 && bin_hits >= 8,
           "CovGraph/BinNet simulation: thresholds hold in " + std::to_string(cov_hits) +
               "/10 and " + std::to_string(bin_hits) + "/10 seeds (need >= 8)",
           timer.seconds());
}

void criterion_7() {
    Timer timer;
    int glasso_hits = 0, binnet_hits = 0;
    for (const auto& o : g_glasso)
        if (o.pcee_gap_fair < o.pcee_gap_std) ++glasso_hits;
    for (const auto& o : g_binnet)
        if (o.pcee_gap_fair < o.pcee_gap_std) ++binnet_hits;
    report(7, glasso_hits >= 8 && binnet_hits >= 8,
           "PCEE gap shrinks: GLasso " + std::to_string(glasso_hits) + "/10, BinNet " +
               std::to_string(binnet_hits) + "/10 seeds (need >= 8)",
           timer.seconds());
}

void criterion_8() {
    Timer timer;
    double worst_tv = 0.0;
    Rng rng = make_rng(777);
    for (long p : {2L, 3L}) {
        Matrix theta = Matrix::Zero(p, p);
        for (long a = 0; a < p; ++a)
            for (long b = a; b < p; ++b) {
                std::uniform_real_distribution<double> unif(-1.0, 1.0);
                theta(a, b) = theta(b, a) = unif(rng);
            }
        const Vector exact = synth::exact_ising_distribution(theta);
        const long n = 100000;
        const Matrix x = synth::gibbs_sample_ising(theta, n, 10000, 10, 31 + p);
        Vector freq = Vector::Zero(1L << p);
        for (long i = 0; i < n; ++i) {
            long code = 0;
            for (long j = 0; j < p; ++j)
                if (x(i, j) > 0.5) code |= 1L << j;
            freq[code] += 1.0 / n;
        }
        worst_tv = std::max(worst_tv, 0.5 * (freq - exact).cwiseAbs().sum());
    }
    const double sec = timer.seconds();
    report(8, worst_tv < 0.02 && sec < 30.0,
           "Gibbs vs exact enumeration: worst TV distance " + std::to_string(worst_tv) +
               " at N=1e5, tol 0.02",
           sec);
}

void criterion_9() {
    Timer timer;
    const auto& fair = g_glasso.front().fair;
    const double eps = quantitative_config(0.01).eps;
    const bool at_solution = std::abs(fair.final_residual) <= 10.0 * eps;

    // Re-derive the residual at a visibly non-stationary feasible point.
    auto gt = synth::gen_block_covariances(100, 5, 2, 1);
    auto ds = gaussian_dataset(gt, {1000, 1000}, 1);
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(Model::GLasso, ds, st, 0.01);
    const Matrix off = 2.0 * Matrix::Identity(100, 100);
    const auto grads =
        moo_gradients(off, family, fair.locals, Penalty::Square, fair.gamma_used);
    const double away = pareto_residual(off, grads, fair.final_ell, 0.01);

    report(9, at_solution && away < 0.0,
           "Pareto certificate: |omega| = " + std::to_string(std::abs(fair.final_residual)) +
               " <= 10 eps at the solution; omega = " + std::to_string(away) +
               " < 0 away from it",
           timer.seconds());
}

void criterion_10() {
    Timer timer;
    const auto& trace = g_glasso.front().fair_trace;
    const std::size_t total = trace.size();
    const long m = trace.back().objectives.size();
    Vector final_f = trace.back().objectives;
    // y_t = t * min_k (F_k(t) - F_k(final)); bounded under the O(1/t) rate.
    std::vector<double> y;
    std::vector<double> ts;
    for (std::size_t i = 1; i + 1 < total; ++i) {
        double gap = 1e300;
        for (long k = 0; k < m; ++k)
            gap = std::min(gap, trace[i].objectives[k] - final_f[k]);
        y.push_back(static_cast<double>(i) * std::max(gap, 0.0));
        ts.push_back(static_cast<double>(i));
    }
    const std::size_t half = y.size() / 2;
    const std::size_t q3 = half + (y.size() - half) / 2;
    double max_q3 = 0.0, max_q4 = 0.0;
    for (std::size_t i = half; i < q3; ++i) max_q3 = std::max(max_q3, y[i]);
    for (std::size_t i = q3; i < y.size(); ++i) max_q4 = std::max(max_q4, y[i]);
    const bool pass = max_q4 <= 1.1 * max_q3 + 1e-9;
    report(10, pass,
           "rate check: max t*gap over last quarter " + std::to_string(max_q4) +
               " vs third quarter " + std::to_string(max_q3) + " (no growth trend)",
           timer.seconds());
}

void criterion_11() {
    Timer timer;
    auto run_point = [&](int p, std::vector<long> n) {
        auto gt = synth::gen_block_covariances(p, 5, 2, 7, /*reset_per_group=*/1);
        auto ds = gaussian_dataset(gt, n, 7);
        std::vector<Matrix> precision;
        for (const auto& sigma : gt.graphs) precision.push_back(models::inverse_spd(sigma));
        FitConfig cfg = quantitative_config(0.01);
        cfg.max_iter = 60000;
        return run_cell(Model::GLasso, ds, cfg, precision, false);
    };

    bool sens_p_ok = true;
    std::string detail = "sens-P %delta:";
    for (int p : {50, 100, 200}) {
        const auto o = run_point(p, {1000, 1000});
        detail += " " + std::to_string(o.pct_delta).substr(0, 5);
        if (!(o.pct_delta >= 40.0)) sens_p_ok = false;
        std::printf("  sens-P p=%d pct_delta=%+.2f%%\n", p, o.pct_delta);
        std::fflush(stdout);
    }

    std::vector<double> ratio_delta;
    detail += "; sens-ratio %delta:";
    for (double ratio : {1.0, 4.0, 10.0}) {
        const auto o = run_point(50, {static_cast<long>(100 * ratio), 100});
        ratio_delta.push_back(o.pct_delta);
        detail += " " + std::to_string(o.pct_delta).substr(0, 5);
        std::printf("  sens-ratio %g pct_delta=%+.2f%%\n", ratio, o.pct_delta);
        std::fflush(stdout);
    }
    const bool ratio_ok =
        ratio_delta.size() == 3 && ratio_delta[0] < ratio_delta[1] &&
        ratio_delta[1] < ratio_delta[2];
    report(11, sens_p_ok && ratio_ok, detail, timer.seconds());
}

}  // namespace

int main() {
    std::printf("fairgm acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_8();

    Timer bundle_timer;
    std::printf("running the GLasso simulation bundle (10 seeds)...\n");
    run_glasso_bundle();
    std::printf("running the CovGraph simulation bundle (10 seeds)...\n");
    run_covgraph_bundle();
    std::printf("running the BinNet simulation bundle (10 seeds)...\n");
    run_binnet_bundle();
    std::printf("bundles done in %.0fs\n", bundle_timer.seconds());

    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_9();
    criterion_10();
    criterion_11();

    int failed = 0;
    for (const auto& r : g_results)
        if (!r.pass) ++failed;
    std::printf("%zu criteria checked, %d failed\n", g_results.size(), failed);
    return failed;
}
