#pragma once

#include "fairgm/models.hpp"

#include <vector>

namespace fairgm {

/// Per-group optimal graphs from the local subproblems, with their raw
/// (unpenalized) losses cached.
struct LocalSolutions {
    std::vector<Matrix> theta;     // Theta*_k
    std::vector<double> raw_loss;  // L(Theta*_k; X_k)

    int num_groups() const { return static_cast<int>(theta.size()); }
};

struct DisparityReport {
    Vector errors;    // E_k
    Vector pairwise;  // Delta_k
    double total = 0.0;
    double spread = 0.0;  // max_k E_k - min_k E_k; zero iff the fairness condition holds
};

/// E_k(Theta) = L(Theta; X_k) - L(Theta*_k; X_k). Raw losses only, so E_k may
/// be negative: Theta*_k minimizes the penalized objective, not L itself.
double disparity_error(const Matrix& theta, int k, const LocalSolutions& local,
                       const models::ModelFamily& family);

Vector disparity_errors(const Matrix& theta, const LocalSolutions& local,
                        const models::ModelFamily& family);

/// Delta_k(Theta) = sum_{s != k} phi(E_k - E_s). Needs K >= 2.
double pairwise_disparity(const Matrix& theta, int k, Penalty penalty,
                          const LocalSolutions& local, const models::ModelFamily& family);
double pairwise_disparity_from_errors(const Vector& errors, int k, Penalty penalty);

/// Chain-rule gradient sum_{s != k} phi'(E_k - E_s) (grad E_k - grad E_s).
/// Square and Exp penalties only. BinNet output is the raw entrywise matrix
/// (see models::binnet_grad).
Matrix disparity_grad(const Matrix& theta, int k, Penalty penalty,
                      const LocalSolutions& local, const models::ModelFamily& family);

/// All K disparity gradients sharing one pass over the per-group parts.
std::vector<Matrix> disparity_grads_all(const Matrix& theta, const Vector& errors,
                                        Penalty penalty, const models::ModelFamily& family);

DisparityReport disparity_report(const Matrix& theta, const LocalSolutions& local,
                                 Penalty penalty, const models::ModelFamily& family);

/// The M = K+1 objective values of the multi-objective problem. Entries k >= 2
/// add gamma ||Theta||_F^2 for CovGraph/BinNet. Passing local == nullptr gives
/// the degenerate M = 1 vector (fairness disabled).
ObjectiveVector objective_vector(const Matrix& theta, const models::ModelFamily& family,
                                 double lambda, double gamma, Penalty penalty,
                                 const LocalSolutions* local);

/// Convexification weight.
/// CovGraph: the disparity Hessians are sums of Kronecker squares, hence PSD,
/// so the bound is 0 (callers may still override through FitConfig).
/// BinNet: gamma = max(0, -0.5 * m) where m is the smallest eigenvalue of any
/// disparity-objective Hessian over the probe points, estimated matrix-free by
/// Lanczos on finite-difference Hessian-vector products.
double choose_gamma(const models::ModelFamily& family, const LocalSolutions& local,
                    const std::vector<Matrix>& probes, Penalty penalty);

}  // namespace fairgm
