#pragma once

#include "fairgm/core.hpp"

namespace fairgm::models {

// GLasso and CovGraph live on the symmetric positive definite cone; BinNet
// only requires symmetry.
bool requires_pd(Model m);

// Cheapest reliable PD oracle: success of the Cholesky factorization.
bool is_symmetric_pd(const Matrix& m);

double log_det_spd(const Matrix& m);  // throws NotPositiveDefinite
Matrix inverse_spd(const Matrix& m);  // throws NotPositiveDefinite

double softplus(double u);  // branch-stable log(1 + exp(u))
double sigmoid(double u);

/// -log det(Theta) + trace(S Theta)
double glasso_loss(const Matrix& theta, const Matrix& S);
/// S - Theta^-1, symmetrized.
Matrix glasso_grad(const Matrix& theta, const Matrix& S);

/// 0.5 ||Sigma - S||_F^2 - tau log det(Sigma)
double covgraph_loss(const Matrix& sigma, const Matrix& S, double tau);
/// Sigma - S - tau Sigma^-1, symmetrized.
Matrix covgraph_grad(const Matrix& sigma, const Matrix& S, double tau);

/// Negative log-pseudo-likelihood of the binary Ising model:
///   -sum_{j,j'} theta_{jj'} (X^T X)_{jj'}
///   + sum_{i,j} softplus(theta_{jj} + sum_{j'!=j} theta_{jj'} x_{ij'}).
/// `cross` must be X^T X for the same data.
double binnet_loss(const Matrix& theta, const Matrix& x, const Matrix& cross);

/// Entrywise gradient of binnet_loss. The result is intentionally NOT
/// symmetrized: Theta's free parameters are the upper triangle (diagonal
/// included), so the derivative along the tied pair (j,j')/(j',j) is
/// G(j,j') + G(j',j). Callers working on the symmetric subspace project with
/// sym_part().
Matrix binnet_grad(const Matrix& theta, const Matrix& x, const Matrix& cross);

inline Matrix sym_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

struct FeasibleResult {
    Matrix matrix;
    bool is_pd;  // meaningful for SymmetricPD model kinds
};

/// Symmetrizes and reports PD-ness for PD-constrained kinds. No eigenvalue
/// clipping: feasibility along the solve is maintained by line search.
FeasibleResult project_feasible(const Matrix& m, Model kind);

/// Losses and gradients of one model family bound to a dataset's statistics.
/// Scope -1 addresses the pooled data, 0..K-1 a single group. Pure functions
/// of immutable state; safe to evaluate from several threads.
class ModelFamily {
public:
    ModelFamily(Model kind, const GroupedDataset& ds, const GroupStats& st, double tau);

    double loss(const Matrix& m, int scope = -1) const;
    Matrix grad(const Matrix& m, int scope = -1) const;  // raw for BinNet

    /// [pooled, group 0, ..., group K-1] losses sharing one factorization /
    /// logit pass. Agrees with loss() entry by entry.
    Vector all_losses(const Matrix& m) const;

    /// Feasibility-checked variants for line searches: false (instead of a
    /// throw) when the Cholesky factorization fails for a PD-constrained
    /// model, reusing that factorization for the log-det.
    bool loss_checked(const Matrix& m, int scope, double& out) const;
    bool all_losses_checked(const Matrix& m, Vector& out) const;

    Model kind() const { return kind_; }
    bool requires_pd() const { return models::requires_pd(kind_); }
    int num_groups() const { return static_cast<int>(group_S_.size()); }
    const Matrix& scatter(int scope = -1) const;  // S (pooled or per group)

    /// Default SPD initializer diag(S) + delta I (identity when S has a zero
    /// diagonal); the zero matrix for BinNet.
    Matrix default_init(int scope = -1) const;

private:
    Model kind_;
    double tau_;
    Matrix pooled_S_;
    std::vector<Matrix> group_S_;
    // BinNet only:
    Matrix pooled_X_;
    std::vector<Matrix> group_X_;
    Matrix pooled_cross_;
    std::vector<Matrix> group_cross_;
    std::vector<int> group_of_row_;

    const Matrix& x_of(int scope) const;
    const Matrix& cross_of(int scope) const;
};

}  // namespace fairgm::models
