#pragma once

#include "fairgm/result.hpp"

namespace fairgm {

/// Euclidean projection onto the standard simplex, by bisection on the
/// water level. Exact to round-off.
Vector project_simplex(const Vector& v);

struct SubproblemSolution {
    Matrix phi_next;   // Phi* = prox_{g/ell}(Theta - ell^-1 sum rho_k grad_k)
    Vector rho;        // simplex weights at the dual maximum
    double omega = 0;  // dual value; a certified lower bound on min_Phi varphi_ell
    double varphi = 0; // primal value varphi_ell(Phi*; Theta), <= 0 at the optimum
    long dual_iters = 0;
};

/// Solves the per-iteration subproblem through its dual: projected gradient
/// ascent of omega(rho) over the simplex, then soft-threshold recovery of
/// Phi*. Stops when the duality gap reaches 1e-6 (1 + |omega|), the dual
/// increment falls below 1e-8, or 500 iterations. `rho_init` warm-starts the
/// ascent (uniform when empty).
SubproblemSolution solve_subproblem(const Matrix& theta, const std::vector<Matrix>& grads,
                                    double ell, double lambda,
                                    const Vector& rho_init = Vector());

/// omega_ell(Theta) <= 0; zero (within tolerance) certifies weak Pareto
/// stationarity.
double pareto_residual(const Matrix& theta, const std::vector<Matrix>& grads, double ell,
                       double lambda);

/// The M gradients of the fair problem at `theta`: the pooled loss gradient
/// followed by the K disparity gradients (each plus 2 gamma theta when the
/// convexification term is active), all projected onto the symmetric
/// subspace.
std::vector<Matrix> moo_gradients(const Matrix& theta, const models::ModelFamily& family,
                                  const LocalSolutions& local, Penalty penalty, double gamma);

struct FairFit {
    GraphEstimate estimate;
    DisparityReport disparity;
    LocalSolutions locals;
    double gamma_used = 0.0;
    Vector final_rho;
    double final_residual = 0.0;  // omega_ell at the returned iterate
    double final_ell = 0.0;       // the ell it was evaluated at
};

/// Algorithm 1: local estimates, initialization at the local graph with the
/// largest pairwise disparity, then the multi-objective proximal-gradient
/// loop. Needs K >= 2 (K = 1 falls through to fit_single). The second form
/// reuses local solutions the caller already has.
FairFit fit_fair(Model model, const GroupedDataset& ds, const FitConfig& cfg);
FairFit fit_fair(Model model, const GroupedDataset& ds, const FitConfig& cfg,
                 LocalSolutions locals);

/// The M = 1 reduction (fairness disabled): the same multi-objective loop run
/// on the single pooled objective. Reproduces fit_single iterate-for-iterate.
FairFit fit_moo_single(Model model, const GroupedDataset& ds, const FitConfig& cfg);

}  // namespace fairgm
