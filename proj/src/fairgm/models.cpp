#include "fairgm/models.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace fairgm::models {

bool requires_pd(Model m) { return m != Model::BinNet; }

namespace {

Eigen::LLT<Matrix> llt_of(const Matrix& m) {
    return Eigen::LLT<Matrix>(m);
}

}  // namespace

bool is_symmetric_pd(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff()))
        return false;
    return llt_of(m).info() == Eigen::Success;
}

double log_det_spd(const Matrix& m) {
    auto llt = llt_of(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Cholesky factorization failed: matrix is not PD");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Matrix inverse_spd(const Matrix& m) {
    auto llt = llt_of(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Cholesky factorization failed: matrix is not PD");
    return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

double softplus(double u) {
    return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double z = std::exp(u);
    return z / (1.0 + z);
}

double glasso_loss(const Matrix& theta, const Matrix& S) {
    return -log_det_spd(theta) + (S.array() * theta.array()).sum();
}

Matrix glasso_grad(const Matrix& theta, const Matrix& S) {
    return sym_part(S - inverse_spd(theta));
}

double covgraph_loss(const Matrix& sigma, const Matrix& S, double tau) {
    const double frob = (sigma - S).squaredNorm();
    return 0.5 * frob - tau * log_det_spd(sigma);
}

Matrix covgraph_grad(const Matrix& sigma, const Matrix& S, double tau) {
    return sym_part(sigma - S - tau * inverse_spd(sigma));
}

namespace {

// Conditional log-odds u_{ij} = theta_jj + sum_{j' != j} theta_{jj'} x_{ij'}.
// For symmetric theta the sum equals (X * theta_offdiag)_{ij}.
Matrix conditional_logits(const Matrix& theta, const Matrix& x) {
    Matrix offdiag = theta;
    offdiag.diagonal().setZero();
    Matrix u = x * offdiag;
    u.rowwise() += theta.diagonal().transpose();
    return u;
}

}  // namespace

double binnet_loss(const Matrix& theta, const Matrix& x, const Matrix& cross) {
    const Matrix u = conditional_logits(theta, x);
    double acc = -(theta.array() * cross.array()).sum();
    for (long j = 0; j < u.cols(); ++j)
        for (long i = 0; i < u.rows(); ++i) acc += softplus(u(i, j));
    return acc;
}

Matrix binnet_grad(const Matrix& theta, const Matrix& x, const Matrix& cross) {
    Matrix sig = conditional_logits(theta, x);
    for (long j = 0; j < sig.cols(); ++j)
        for (long i = 0; i < sig.rows(); ++i) sig(i, j) = sigmoid(sig(i, j));
    Matrix g = sig.transpose() * x - cross;
    g.diagonal() = sig.colwise().sum().transpose() - cross.diagonal();
    return g;
}

FeasibleResult project_feasible(const Matrix& m, Model kind) {
    if (m.rows() != m.cols()) throw InvalidArgument("project_feasible needs a square matrix");
    FeasibleResult out;
    out.matrix = sym_part(m);
    out.is_pd = requires_pd(kind) ? llt_of(out.matrix).info() == Eigen::Success : true;
    return out;
}

ModelFamily::ModelFamily(Model kind, const GroupedDataset& ds, const GroupStats& st, double tau)
    : kind_(kind), tau_(tau), pooled_S_(st.pooled_S), group_S_(st.group_S) {
    if (kind_ == Model::BinNet) {
        if (!ds.binary) throw InvalidArgument("BinNet requires binary data");
        pooled_X_ = ds.data;
        pooled_cross_ = st.pooled_cross;
        group_cross_ = st.group_cross;
        group_of_row_ = ds.group_of_row;
        group_X_.reserve(ds.num_groups);
        for (int k = 0; k < ds.num_groups; ++k) group_X_.push_back(ds.group_rows(k));
    }
}

const Matrix& ModelFamily::scatter(int scope) const {
    return scope < 0 ? pooled_S_ : group_S_.at(scope);
}

const Matrix& ModelFamily::x_of(int scope) const {
    return scope < 0 ? pooled_X_ : group_X_.at(scope);
}

const Matrix& ModelFamily::cross_of(int scope) const {
    return scope < 0 ? pooled_cross_ : group_cross_.at(scope);
}

double ModelFamily::loss(const Matrix& m, int scope) const {
    switch (kind_) {
        case Model::GLasso: return glasso_loss(m, scatter(scope));
        case Model::CovGraph: return covgraph_loss(m, scatter(scope), tau_);
        case Model::BinNet: return binnet_loss(m, x_of(scope), cross_of(scope));
    }
    return 0.0;
}

Matrix ModelFamily::grad(const Matrix& m, int scope) const {
    switch (kind_) {
        case Model::GLasso: return glasso_grad(m, scatter(scope));
        case Model::CovGraph: return covgraph_grad(m, scatter(scope), tau_);
        case Model::BinNet: return binnet_grad(m, x_of(scope), cross_of(scope));
    }
    return Matrix();
}

namespace {

bool try_log_det(const Matrix& m, double& out) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return false;
    out = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return true;
}

}  // namespace

Vector ModelFamily::all_losses(const Matrix& m) const {
    Vector out;
    if (!all_losses_checked(m, out))
        throw NotPositiveDefinite("Cholesky factorization failed: matrix is not PD");
    return out;
}

bool ModelFamily::loss_checked(const Matrix& m, int scope, double& out) const {
    if (kind_ == Model::BinNet) {
        out = binnet_loss(m, x_of(scope), cross_of(scope));
        return true;
    }
    double ld = 0.0;
    if (!try_log_det(m, ld)) return false;
    const Matrix& S = scatter(scope);
    out = kind_ == Model::GLasso ? -ld + (S.array() * m.array()).sum()
                                 : 0.5 * (m - S).squaredNorm() - tau_ * ld;
    return true;
}

bool ModelFamily::all_losses_checked(const Matrix& m, Vector& out) const {
    const int K = num_groups();
    out.resize(K + 1);
    switch (kind_) {
        case Model::GLasso: {
            double ld = 0.0;
            if (!try_log_det(m, ld)) return false;
            out[0] = -ld + (pooled_S_.array() * m.array()).sum();
            for (int k = 0; k < K; ++k)
                out[k + 1] = -ld + (group_S_[k].array() * m.array()).sum();
            break;
        }
        case Model::CovGraph: {
            double ld = 0.0;
            if (!try_log_det(m, ld)) return false;
            out[0] = 0.5 * (m - pooled_S_).squaredNorm() - tau_ * ld;
            for (int k = 0; k < K; ++k)
                out[k + 1] = 0.5 * (m - group_S_[k]).squaredNorm() - tau_ * ld;
            break;
        }
        case Model::BinNet: {
            // One logit pass over the pooled rows; the group losses are
            // row-subset sums of the same softplus matrix.
            Matrix offdiag = m;
            offdiag.diagonal().setZero();
            Matrix u = pooled_X_ * offdiag;
            u.rowwise() += m.diagonal().transpose();
            Vector row_softplus = Vector::Zero(u.rows());
            for (long j = 0; j < u.cols(); ++j)
                for (long i = 0; i < u.rows(); ++i) row_softplus[i] += softplus(u(i, j));
            Vector group_sum = Vector::Zero(K);
            for (long i = 0; i < u.rows(); ++i) group_sum[group_of_row_[i]] += row_softplus[i];
            out[0] = -(m.array() * pooled_cross_.array()).sum() + row_softplus.sum();
            for (int k = 0; k < K; ++k)
                out[k + 1] = -(m.array() * group_cross_[k].array()).sum() + group_sum[k];
            break;
        }
    }
    return true;
}

Matrix ModelFamily::default_init(int scope) const {
    const Matrix& S = scatter(scope);
    const long p = S.cols();
    if (kind_ == Model::BinNet) return Matrix::Zero(p, p);
    if (S.diagonal().cwiseAbs().minCoeff() <= 0.0) return Matrix::Identity(p, p);
    Matrix init = Matrix::Zero(p, p);
    init.diagonal() = S.diagonal().array() + 1e-3;
    return init;
}

}  // namespace fairgm::models
