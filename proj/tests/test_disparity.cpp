#include "doctest.h"

#include "fairgm/disparity.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace fairgm;

namespace {

struct Instance {
    GroupedDataset ds;
    GroupStats st;
    models::ModelFamily family;
    LocalSolutions local;
};

// Local "solutions" here are arbitrary feasible matrices with honestly cached
// raw losses; the disparity identities under test do not require optimality.
Instance make_instance(Model model, long n, long p, Rng& rng, bool identical_groups = false) {
    Matrix x = model == Model::BinNet ? fairgm::test::random_binary(n, p, rng)
                                      : fairgm::test::random_matrix(n, p, rng);
    if (identical_groups) x.bottomRows(n / 2) = x.topRows(n / 2);
    std::vector<long> labels(n, 1);
    for (long i = n / 2; i < n; ++i) labels[i] = 2;
    GroupedDataset ds = validate_dataset(x, labels, model == Model::BinNet);
    GroupStats st = group_stats(ds);
    models::ModelFamily family(model, ds, st, 0.1);
    LocalSolutions local;
    for (int k = 0; k < ds.num_groups; ++k) {
        Matrix guess = model == Model::BinNet ? fairgm::test::random_symmetric(p, rng, 0.3)
                                              : fairgm::test::random_spd(p, rng);
        if (identical_groups && k > 0) guess = local.theta[0];
        local.raw_loss.push_back(family.loss(guess, k));
        local.theta.push_back(std::move(guess));
    }
    return {std::move(ds), std::move(st), std::move(family), std::move(local)};
}

}  // namespace

TEST_CASE("disparity_error vanishes at the local solution") {
    Rng rng = make_rng(211);
    auto inst = make_instance(Model::GLasso, 12, 3, rng);
    for (int k = 0; k < 2; ++k)
        CHECK(disparity_error(inst.local.theta[k], k, inst.local, inst.family) ==
              doctest::Approx(0.0));
}

TEST_CASE("identical groups give identical disparity errors for every theta") {
    Rng rng = make_rng(223);
    for (Model model : {Model::GLasso, Model::BinNet}) {
        auto inst = make_instance(model, 12, 3, rng, /*identical_groups=*/true);
        for (int trial = 0; trial < 3; ++trial) {
            const Matrix theta = model == Model::BinNet
                                     ? fairgm::test::random_symmetric(3, rng)
                                     : fairgm::test::random_spd(3, rng);
            const Vector e = disparity_errors(theta, inst.local, inst.family);
            CHECK(e[0] == doctest::Approx(e[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("disparity_error matches recomputation from scratch losses") {
    Rng rng = make_rng(227);
    auto inst = make_instance(Model::CovGraph, 10, 3, rng);
    const Matrix theta = fairgm::test::random_spd(3, rng);
    for (int k = 0; k < 2; ++k) {
        const Matrix xk = inst.ds.group_rows(k);
        const Matrix sk = xk.transpose() * xk / static_cast<double>(xk.rows());
        const double direct = models::covgraph_loss(theta, sk, 0.1) -
                              models::covgraph_loss(inst.local.theta[k], sk, 0.1);
        CHECK(disparity_error(theta, k, inst.local, inst.family) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("pairwise_disparity closed forms") {
    SUBCASE("square penalty at equal errors") {
        Vector e(2);
        e << 1.7, 1.7;
        CHECK(pairwise_disparity_from_errors(e, 0, Penalty::Square) == doctest::Approx(0.0));
    }
    SUBCASE("exp penalty at equal errors") {
        Vector e(2);
        e << -0.4, -0.4;
        CHECK(pairwise_disparity_from_errors(e, 0, Penalty::Exp) == doctest::Approx(1.0));
    }
    SUBCASE("three groups, square penalty") {
        Vector e(3);
        e << 1.0, 0.0, 0.0;
        CHECK(pairwise_disparity_from_errors(e, 0, Penalty::Square) == doctest::Approx(1.0));
    }
    SUBCASE("a single group is rejected") {
        CHECK_THROWS_AS(pairwise_disparity_from_errors(Vector::Zero(1), 0, Penalty::Square),
                        InvalidArgument);
    }
}

TEST_CASE("disparity_grad is zero under symmetry") {
    Rng rng = make_rng(229);
    SUBCASE("square penalty with equal errors") {
        auto inst = make_instance(Model::GLasso, 12, 3, rng, true);
        const Matrix theta = fairgm::test::random_spd(3, rng);
        CHECK(disparity_grad(theta, 0, Penalty::Square, inst.local, inst.family)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    SUBCASE("identical groups, any model") {
        auto inst = make_instance(Model::BinNet, 12, 3, rng, true);
        const Matrix theta = fairgm::test::random_symmetric(3, rng);
        CHECK(disparity_grad(theta, 1, Penalty::Square, inst.local, inst.family)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("disparity_grad rejects the abs penalty") {
    Rng rng = make_rng(233);
    auto inst = make_instance(Model::GLasso, 12, 3, rng);
    CHECK_THROWS_AS(disparity_grad(fairgm::test::random_spd(3, rng), 0, Penalty::Abs,
                                   inst.local, inst.family),
                    UnsupportedPenaltyGradient);
}

TEST_CASE("disparity_grad matches finite differences for all models and penalties") {
    Rng rng = make_rng(239);
    for (Model model : {Model::GLasso, Model::CovGraph, Model::BinNet}) {
        auto inst = make_instance(model, 16, 4, rng);
        const Matrix theta = model == Model::BinNet ? fairgm::test::random_symmetric(4, rng, 0.4)
                                                    : fairgm::test::random_spd(4, rng);
        for (Penalty pen : {Penalty::Square, Penalty::Exp}) {
            for (int k = 0; k < 2; ++k) {
                const Matrix fd = fairgm::test::fd_sym_gradient(
                    [&](const Matrix& m) {
                        return pairwise_disparity(m, k, pen, inst.local, inst.family);
                    },
                    theta);
                const Matrix analytic = fairgm::test::sym_param_gradient(
                    disparity_grad(theta, k, pen, inst.local, inst.family));
                CHECK(fairgm::test::rel_error(fd, analytic) < 1e-4);
            }
        }
    }
}

TEST_CASE("GLasso error differences are affine in theta") {
    Rng rng = make_rng(241);
    auto inst = make_instance(Model::GLasso, 14, 3, rng);
    const Matrix a = fairgm::test::random_spd(3, rng);
    const Matrix b = fairgm::test::random_spd(3, rng);
    auto diff = [&](const Matrix& theta) {
        const Vector e = disparity_errors(theta, inst.local, inst.family);
        return e[0] - e[1];
    };
    // Linearity along the segment: value at the midpoint equals the average.
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double lhs = diff(alpha * a + (1 - alpha) * b);
        const double rhs = alpha * diff(a) + (1 - alpha) * diff(b);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    // And the slope is trace((S_1 - S_2) D).
    const Matrix dir = fairgm::test::random_symmetric(3, rng, 0.1);
    const double slope = diff(a + dir) - diff(a);
    const Matrix s_diff = inst.st.group_S[0] - inst.st.group_S[1];
    CHECK(slope == doctest::Approx((s_diff.array() * dir.array()).sum()).epsilon(1e-8));
}

TEST_CASE("fairness certificate: spread is zero iff errors are equal") {
    Rng rng = make_rng(251);
    auto equal = make_instance(Model::GLasso, 12, 3, rng, true);
    const Matrix theta = fairgm::test::random_spd(3, rng);
    auto rep = disparity_report(theta, equal.local, Penalty::Square, equal.family);
    CHECK(rep.spread == doctest::Approx(0.0));
    CHECK(rep.total == doctest::Approx(0.0));

    auto skew = make_instance(Model::GLasso, 12, 3, rng, false);
    auto rep2 = disparity_report(theta, skew.local, Penalty::Square, skew.family);
    CHECK(rep2.spread > 0.0);
    CHECK(rep2.total > 0.0);
    CHECK(rep2.total == doctest::Approx(rep2.pairwise.sum()).epsilon(1e-12));
}

TEST_CASE("objective_vector composition") {
    Rng rng = make_rng(257);
    SUBCASE("identical groups collapse the disparity entries to the l1 term") {
        auto inst = make_instance(Model::GLasso, 12, 3, rng, true);
        const Matrix theta = fairgm::test::random_spd(3, rng);
        const double lambda = 0.05;
        auto vec = objective_vector(theta, inst.family, lambda, 0.0, Penalty::Square,
                                    &inst.local);
        REQUIRE(vec.values.size() == 3);
        const double l1 = lambda * theta.cwiseAbs().sum();
        CHECK(vec.values[1] == doctest::Approx(l1).epsilon(1e-12));
        CHECK(vec.values[2] == doctest::Approx(l1).epsilon(1e-12));
    }
    SUBCASE("degenerate M = 1 vector") {
        auto inst = make_instance(Model::GLasso, 12, 3, rng);
        const Matrix theta = fairgm::test::random_spd(3, rng);
        auto vec = objective_vector(theta, inst.family, 0.1, 0.0, Penalty::Square, nullptr);
        REQUIRE(vec.values.size() == 1);
        CHECK(vec.values[0] ==
              doctest::Approx(inst.family.loss(theta) + 0.1 * theta.cwiseAbs().sum()));
    }
    SUBCASE("entries match independent recomputation, gamma folded for k >= 2") {
        auto inst = make_instance(Model::BinNet, 14, 3, rng);
        const Matrix theta = fairgm::test::random_symmetric(3, rng, 0.4);
        const double lambda = 0.02, gamma = 0.7;
        auto vec =
            objective_vector(theta, inst.family, lambda, gamma, Penalty::Square, &inst.local);
        REQUIRE(vec.values.size() == 3);
        const double l1 = lambda * theta.cwiseAbs().sum();
        const double fr = gamma * theta.squaredNorm();
        CHECK(vec.values[0] ==
              doctest::Approx(inst.family.loss(theta) + l1).epsilon(1e-12));
        for (int k = 0; k < 2; ++k) {
            const double dk =
                pairwise_disparity(theta, k, Penalty::Square, inst.local, inst.family);
            CHECK(vec.values[k + 1] == doctest::Approx(dk + l1 + fr).epsilon(1e-12));
            CHECK(vec.values[k + 1] ==
                  doctest::Approx(vec.smooth[k + 1] + vec.l1[k + 1] + vec.frob[k + 1])
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("choose_gamma is zero for CovGraph and for symmetric BinNet groups") {
    Rng rng = make_rng(263);
    auto cov = make_instance(Model::CovGraph, 12, 3, rng);
    CHECK(choose_gamma(cov.family, cov.local, {}, Penalty::Square) == doctest::Approx(0.0));

    auto ident = make_instance(Model::BinNet, 12, 3, rng, true);
    const std::vector<Matrix> probes{fairgm::test::random_symmetric(3, rng, 0.3)};
    CHECK(choose_gamma(ident.family, ident.local, probes, Penalty::Square) ==
          doctest::Approx(0.0));

    auto gl = make_instance(Model::GLasso, 12, 3, rng);
    CHECK_THROWS_AS(choose_gamma(gl.family, gl.local, {}, Penalty::Square), InvalidArgument);
}

TEST_CASE("choose_gamma tracks the dense-Hessian eigenvalue oracle") {
    Rng rng = make_rng(269);
    const long p = 4;
    auto inst = make_instance(Model::BinNet, 20, p, rng);
    const Matrix probe = fairgm::test::random_symmetric(p, rng, 0.6);

    // Dense Hessian of each disparity objective in an orthonormal basis of the
    // symmetric subspace, by central differences of the analytic gradient.
    const double h = 1e-5 * (1.0 + probe.norm());
    std::vector<Matrix> basis;
    for (long j = 0; j < p; ++j)
        for (long i = j; i < p; ++i) {
            Matrix b = Matrix::Zero(p, p);
            if (i == j) {
                b(i, i) = 1.0;
            } else {
                b(i, j) = b(j, i) = 1.0 / std::sqrt(2.0);
            }
            basis.push_back(b);
        }
    const int dim = static_cast<int>(basis.size());
    double min_eig = 0.0;
    for (int k = 0; k < 2; ++k) {
        auto sgrad = [&](const Matrix& at) {
            return models::sym_part(disparity_grad(at, k, Penalty::Square, inst.local,
                                                   inst.family));
        };
        Matrix hess(dim, dim);
        for (int b = 0; b < dim; ++b) {
            const Matrix col = (sgrad(probe + h * basis[b]) - sgrad(probe - h * basis[b])) /
                               (2.0 * h);
            for (int a = 0; a < dim; ++a)
                hess(a, b) = (col.array() * basis[a].array()).sum();
        }
        hess = 0.5 * (hess + hess.transpose());
        min_eig = std::min(min_eig,
                           Eigen::SelfAdjointEigenSolver<Matrix>(hess).eigenvalues().minCoeff());
    }
    const double oracle_gamma = std::max(0.0, -0.5 * min_eig);

    const double impl = choose_gamma(inst.family, inst.local, {probe}, Penalty::Square);
    if (oracle_gamma == 0.0) {
        CHECK(impl == doctest::Approx(0.0).epsilon(1e-8));
    } else {
        CHECK(std::abs(impl - oracle_gamma) <= 0.1 * oracle_gamma);
    }
}
