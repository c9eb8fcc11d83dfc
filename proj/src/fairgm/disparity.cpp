#include "fairgm/disparity.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fairgm {

namespace {

void check_local(const LocalSolutions& local, const models::ModelFamily& family) {
    if (local.num_groups() != family.num_groups() ||
        local.raw_loss.size() != local.theta.size())
        throw InvalidArgument("local solutions do not match the dataset's groups");
}

// grad E_k up to a theta-only term that cancels in every E_k - E_s difference.
// GLasso: S_k; CovGraph: -S_k; BinNet: the per-group raw gradient.
std::vector<Matrix> group_grad_parts(const Matrix& theta, const models::ModelFamily& family) {
    std::vector<Matrix> parts;
    const int K = family.num_groups();
    parts.reserve(K);
    for (int k = 0; k < K; ++k) {
        switch (family.kind()) {
            case Model::GLasso: parts.push_back(family.scatter(k)); break;
            case Model::CovGraph: parts.push_back(-family.scatter(k)); break;
            case Model::BinNet: parts.push_back(family.grad(theta, k)); break;
        }
    }
    return parts;
}

}  // namespace

double disparity_error(const Matrix& theta, int k, const LocalSolutions& local,
                       const models::ModelFamily& family) {
    check_local(local, family);
    if (k < 0 || k >= family.num_groups()) throw InvalidArgument("group index out of range");
    return family.loss(theta, k) - local.raw_loss[k];
}

Vector disparity_errors(const Matrix& theta, const LocalSolutions& local,
                        const models::ModelFamily& family) {
    check_local(local, family);
    const int K = family.num_groups();
    Vector e(K);
    for (int k = 0; k < K; ++k) e[k] = family.loss(theta, k) - local.raw_loss[k];
    return e;
}

double pairwise_disparity_from_errors(const Vector& errors, int k, Penalty penalty) {
    const int K = static_cast<int>(errors.size());
    if (K < 2) throw InvalidArgument("pairwise disparity needs at least two groups");
    double acc = 0.0;
    for (int s = 0; s < K; ++s) {
        if (s == k) continue;
        acc += penalty_value(penalty, errors[k] - errors[s]);
    }
    return acc;
}

double pairwise_disparity(const Matrix& theta, int k, Penalty penalty,
                          const LocalSolutions& local, const models::ModelFamily& family) {
    return pairwise_disparity_from_errors(disparity_errors(theta, local, family), k, penalty);
}

std::vector<Matrix> disparity_grads_all(const Matrix& theta, const Vector& errors,
                                        Penalty penalty, const models::ModelFamily& family) {
    const int K = family.num_groups();
    if (K < 2) throw InvalidArgument("disparity gradients need at least two groups");
    const auto parts = group_grad_parts(theta, family);
    std::vector<Matrix> grads;
    grads.reserve(K);
    for (int k = 0; k < K; ++k) {
        Matrix g = Matrix::Zero(theta.rows(), theta.cols());
        double slope_sum = 0.0;
        for (int s = 0; s < K; ++s) {
            if (s == k) continue;
            const double w = penalty_slope(penalty, errors[k] - errors[s]);
            slope_sum += w;
            g.noalias() -= w * parts[s];
        }
        g.noalias() += slope_sum * parts[k];
        grads.push_back(std::move(g));
    }
    return grads;
}

Matrix disparity_grad(const Matrix& theta, int k, Penalty penalty,
                      const LocalSolutions& local, const models::ModelFamily& family) {
    if (k < 0 || k >= family.num_groups()) throw InvalidArgument("group index out of range");
    const Vector errors = disparity_errors(theta, local, family);
    return disparity_grads_all(theta, errors, penalty, family)[k];
}

DisparityReport disparity_report(const Matrix& theta, const LocalSolutions& local,
                                 Penalty penalty, const models::ModelFamily& family) {
    DisparityReport rep;
    rep.errors = disparity_errors(theta, local, family);
    const int K = static_cast<int>(rep.errors.size());
    rep.pairwise = Vector::Zero(K);
    if (K >= 2) {
        for (int k = 0; k < K; ++k)
            rep.pairwise[k] = pairwise_disparity_from_errors(rep.errors, k, penalty);
    }
    rep.total = rep.pairwise.sum();
    rep.spread = K > 0 ? rep.errors.maxCoeff() - rep.errors.minCoeff() : 0.0;
    return rep;
}

ObjectiveVector objective_vector(const Matrix& theta, const models::ModelFamily& family,
                                 double lambda, double gamma, Penalty penalty,
                                 const LocalSolutions* local) {
    const double l1 = lambda * theta.cwiseAbs().sum();
    ObjectiveVector out;
    if (local == nullptr) {
        out.values = out.smooth = out.l1 = out.frob = Vector::Zero(1);
        out.smooth[0] = family.loss(theta);
        out.l1[0] = l1;
        out.values[0] = out.smooth[0] + out.l1[0];
        return out;
    }
    check_local(*local, family);
    const int K = family.num_groups();
    if (K < 2) throw InvalidArgument("the fair objective vector needs at least two groups");
    const int M = K + 1;
    out.values = out.smooth = out.l1 = out.frob = Vector::Zero(M);
    out.smooth[0] = family.loss(theta);
    const Vector errors = disparity_errors(theta, *local, family);
    const bool has_frob = family.kind() != Model::GLasso && gamma > 0.0;
    const double frob = has_frob ? gamma * theta.squaredNorm() : 0.0;
    for (int k = 0; k < K; ++k) {
        out.smooth[k + 1] = pairwise_disparity_from_errors(errors, k, penalty);
        out.frob[k + 1] = frob;
    }
    out.l1.setConstant(l1);
    out.values = out.smooth + out.l1 + out.frob;
    return out;
}

namespace {

// Smallest eigenvalue of the Hessian of f_{k+1} restricted to the symmetric
// subspace, at one probe point. Lanczos with full reorthogonalization on
// central-difference Hessian-vector products of the analytic gradient.
double min_eig_disparity_hessian(const Matrix& probe, int k, Penalty penalty,
                                 const LocalSolutions& local,
                                 const models::ModelFamily& family, int max_steps) {
    const long p = probe.rows();
    const double h = 1e-5 * (1.0 + probe.norm());
    auto sym_grad = [&](const Matrix& at) {
        const Vector errors = disparity_errors(at, local, family);
        return models::sym_part(disparity_grads_all(at, errors, penalty, family)[k]);
    };
    auto hvp = [&](const Matrix& v) -> Matrix {
        return (sym_grad(probe + h * v) - sym_grad(probe - h * v)) / (2.0 * h);
    };

    const int dim = static_cast<int>(p * (p + 1) / 2);
    const int steps = std::min(max_steps, dim);
    std::vector<Matrix> basis;
    basis.reserve(steps);
    Vector alpha(steps), beta(steps);

    // Deterministic symmetric start vector with no special structure.
    Matrix v = Matrix::Zero(p, p);
    for (long j = 0; j < p; ++j)
        for (long i = j; i < p; ++i) {
            const double val = std::sin(1.0 + 3.7 * i + 0.9 * j);
            v(i, j) = val;
            v(j, i) = val;
        }
    v /= v.norm();

    int m = 0;
    double prev_beta = 0.0;
    Matrix v_prev = Matrix::Zero(p, p);
    for (int it = 0; it < steps; ++it) {
        basis.push_back(v);
        Matrix w = hvp(v);
        if (!w.allFinite()) throw NumericalError("non-finite Hessian-vector product");
        alpha[it] = (w.array() * v.array()).sum();
        w -= alpha[it] * v + prev_beta * v_prev;
        for (const auto& b : basis) w -= (w.array() * b.array()).sum() * b;
        const double nb = w.norm();
        m = it + 1;
        if (nb < 1e-10 * (1.0 + std::abs(alpha[it]))) break;
        beta[it] = nb;
        v_prev = v;
        v = w / nb;
        prev_beta = nb;
    }

    Matrix tri = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(tri);
    return es.eigenvalues().minCoeff();
}

}  // namespace

double choose_gamma(const models::ModelFamily& family, const LocalSolutions& local,
                    const std::vector<Matrix>& probes, Penalty penalty) {
    if (family.kind() == Model::GLasso)
        throw InvalidArgument("choose_gamma applies to CovGraph and BinNet only");
    if (family.kind() == Model::CovGraph) return 0.0;
    check_local(local, family);
    if (family.num_groups() < 2) return 0.0;
    double min_eig = 0.0;
    for (const auto& probe : probes) {
        for (int k = 0; k < family.num_groups(); ++k) {
            min_eig = std::min(
                min_eig, min_eig_disparity_hessian(probe, k, penalty, local, family, 48));
        }
    }
    return std::max(0.0, -0.5 * min_eig);
}

}  // namespace fairgm
