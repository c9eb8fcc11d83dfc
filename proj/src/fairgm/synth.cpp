#include "fairgm/synth.hpp"

#include "fairgm/models.hpp"
#include "fairgm/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fairgm::synth {

GroundTruth gen_block_covariances(int p, int q, int k, std::uint64_t seed,
                                  int reset_per_group) {
    if (p < 2 || q < 1 || k < 1) throw InvalidArgument("need p >= 2, q >= 1, k >= 1");
    if (p % q != 0) throw InvalidArgument("q must divide p");
    if (reset_per_group < 1) throw InvalidArgument("reset_per_group must be >= 1");
    if (reset_per_group * (k - 1) > q)
        throw InvalidArgument("not enough unaltered blocks for the requested groups");

    const int bs = p / q;
    Rng rng = make_rng(seed, 0);
    std::normal_distribution<double> gauss(0.7, 0.2);

    Matrix sigma = Matrix::Zero(p, p);
    for (int b = 0; b < q; ++b)
        for (int i = 0; i < bs; ++i)
            for (int j = 0; j < bs; ++j) sigma(b * bs + i, b * bs + j) = gauss(rng);

    sigma = models::sym_part(sigma);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    Vector lam = es.eigenvalues().cwiseMax(1e-5);
    sigma = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    sigma = models::sym_part(sigma);

    GroundTruth gt;
    gt.p = p;
    gt.blocks_or_hubs = q;
    gt.k = k;
    gt.seed = seed;
    gt.graphs.push_back(sigma);
    int next_block = 0;
    for (int g = 1; g < k; ++g) {
        Matrix sg = gt.graphs.back();
        for (int r = 0; r < reset_per_group; ++r, ++next_block) {
            const int b0 = next_block * bs;
            sg.block(b0, b0, bs, bs) = Matrix::Identity(bs, bs);
        }
        gt.graphs.push_back(std::move(sg));
    }
    return gt;
}

Matrix sample_mvn(const Matrix& sigma, long n, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("need n >= 1");
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("sample_mvn needs a positive definite covariance");
    const Matrix chol = llt.matrixL();
    Rng rng = make_rng(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const long p = sigma.rows();
    Matrix z(n, p);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < p; ++j) z(i, j) = gauss(rng);
    return z * chol.transpose();
}

GroundTruth gen_hub_networks(int p, int h, int k, std::uint64_t seed) {
    if (p < 4) throw InvalidArgument("need p >= 4");
    if (h < 1 || h > p) throw InvalidArgument("need 1 <= h <= p");
    if (k < 1 || h - 2 * (k - 1) < 0)
        throw InvalidArgument("need h - 2(k-1) >= 0 hub nodes for k groups");

    Rng rng = make_rng(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<int> nodes(p);
    for (int i = 0; i < p; ++i) nodes[i] = i;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<int> hubs(nodes.begin(), nodes.begin() + h);
    std::vector<bool> is_hub(p, false);
    for (int hub : hubs) is_hub[hub] = true;

    // Upper triangle only, mirrored, so the draw keeps the matrix symmetric.
    Matrix adj = Matrix::Zero(p, p);
    for (int j = 0; j < p; ++j)
        for (int j2 = j + 1; j2 < p; ++j2) {
            const double prob = (is_hub[j] || is_hub[j2]) ? 0.99 : 0.01;
            adj(j, j2) = adj(j2, j) = unit(rng) < prob ? 1.0 : 0.0;
        }

    auto draw_weight = [&](double lo, double hi) {
        const double mag = lo + (hi - lo) * unit(rng);
        return unit(rng) < 0.5 ? -mag : mag;
    };
    Matrix e = Matrix::Zero(p, p);
    for (int j = 0; j < p; ++j)
        for (int j2 = j + 1; j2 < p; ++j2) {
            if (adj(j, j2) == 0.0) continue;
            const double w = (is_hub[j] || is_hub[j2]) ? draw_weight(0.25, 0.75)
                                                       : draw_weight(0.25, 0.5);
            e(j, j2) = e(j2, j) = w;
        }

    const double lam_min = Eigen::SelfAdjointEigenSolver<Matrix>(e).eigenvalues().minCoeff();
    Matrix theta = e + (0.1 - lam_min) * Matrix::Identity(p, p);

    // Hubs are eliminated in ascending node-index order.
    std::sort(hubs.begin(), hubs.end());

    GroundTruth gt;
    gt.p = p;
    gt.blocks_or_hubs = h;
    gt.k = k;
    gt.seed = seed;
    gt.hubs = hubs;
    gt.graphs.push_back(theta);
    int consumed = 0;
    for (int g = 1; g < k; ++g) {
        Matrix tg = gt.graphs.back();
        for (int r = 0; r < 2 && consumed < h; ++r, ++consumed) {
            const int hub = hubs[consumed];
            const double diag = tg(hub, hub);
            tg.row(hub).setZero();
            tg.col(hub).setZero();
            tg(hub, hub) = diag;
        }
        gt.graphs.push_back(std::move(tg));
    }
    return gt;
}

Matrix gibbs_sample_ising(const Matrix& theta, long n, long burn_in, long thinning,
                          std::uint64_t seed) {
    if (theta.rows() != theta.cols()) throw InvalidArgument("theta must be square");
    if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidArgument("theta must be symmetric");
    if (n < 1 || burn_in < 0 || thinning < 1)
        throw InvalidArgument("need n >= 1, burn_in >= 0, thinning >= 1");

    const long p = theta.rows();
    Rng rng = make_rng(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Vector x(p);
    for (long j = 0; j < p; ++j) x[j] = unit(rng) < 0.5 ? 0.0 : 1.0;

    auto sweep = [&]() {
        for (long j = 0; j < p; ++j) {
            double u = theta(j, j);
            for (long j2 = 0; j2 < p; ++j2)
                if (j2 != j) u += theta(j, j2) * x[j2];
            x[j] = unit(rng) < models::sigmoid(u) ? 1.0 : 0.0;
        }
    };

    for (long t = 0; t < burn_in; ++t) sweep();
    Matrix out(n, p);
    for (long i = 0; i < n; ++i) {
        for (long t = 0; t < thinning; ++t) sweep();
        out.row(i) = x.transpose();
    }
    return out;
}

Vector exact_ising_distribution(const Matrix& theta) {
    const long p = theta.rows();
    if (theta.cols() != p) throw InvalidArgument("theta must be square");
    if (p > 12) throw InvalidArgument("exact enumeration is limited to p <= 12");
    const long count = 1L << p;
    Vector logmass(count);
    for (long code = 0; code < count; ++code) {
        double e = 0.0;
        for (long j = 0; j < p; ++j) {
            if (!(code >> j & 1)) continue;
            e += theta(j, j);
            for (long j2 = j + 1; j2 < p; ++j2)
                if (code >> j2 & 1) e += theta(j, j2);
        }
        logmass[code] = e;
    }
    const double top = logmass.maxCoeff();
    Vector probs = (logmass.array() - top).exp();
    probs /= probs.sum();
    return probs;
}

}  // namespace fairgm::synth
