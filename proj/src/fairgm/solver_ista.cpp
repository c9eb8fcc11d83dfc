#include "fairgm/solver_ista.hpp"

#include "fairgm/prox_detail.hpp"

#include <cmath>
#include <future>

namespace fairgm {

Matrix soft_threshold(const Matrix& m, double t) {
    if (t < 0.0) throw InvalidArgument("soft_threshold needs t >= 0");
    return m.unaryExpr([t](double x) {
        const double mag = std::abs(x) - t;
        return mag > 0.0 ? (x > 0.0 ? mag : -mag) : 0.0;
    });
}

GraphEstimate fit_single_scope(const models::ModelFamily& family, int scope,
                               const FitConfig& cfg) {
    cfg.validate();
    const bool needs_pd = family.requires_pd();

    Matrix theta = family.default_init(scope);
    if (needs_pd && !models::is_symmetric_pd(theta))
        throw NotPositiveDefinite("initializer is not positive definite");

    GraphEstimate est;
    est.model = family.kind();
    est.matrix = theta;
    if (cfg.record_iterates) est.iterates.push_back(theta);

    double f = family.loss(theta, scope);
    {
        TraceRow row;
        row.objectives = Vector::Constant(1, f + cfg.lambda * theta.cwiseAbs().sum());
        row.rho = Vector::Constant(1, 1.0);
        est.trace.push_back(row);
    }

    double ell_accepted = cfg.ell0;
    for (long t = 0; t < cfg.max_iter; ++t) {
        const Matrix grad = models::sym_part(family.grad(theta, scope));
        if (!grad.allFinite()) throw NumericalError("non-finite gradient");

        double ell = std::max(cfg.ell0, ell_accepted * cfg.ell_shrink);
        Matrix cand, delta;
        double f_cand = 0.0;
        bool at_floor = false;
        for (;;) {
            cand = detail::prox_step(theta, grad, ell, cfg.lambda);
            const bool feasible = family.loss_checked(cand, scope, f_cand);
            bool ok = feasible;
            if (ok) {
                delta = cand - theta;
                ok = detail::descent_ok(f_cand, f, grad, delta, ell);
            }
            if (ok) break;
            ell *= cfg.ell_growth;
            if (ell > detail::kEllCeiling) {
                if (!feasible)
                    throw NumericalError(
                        "candidate stays infeasible past the prox-parameter ceiling");
                // The descent test fails only by round-off at this point: the
                // iterate sits at the numerical floor of the objective.
                at_floor = true;
                break;
            }
        }
        if (at_floor) break;
        ell_accepted = ell;

        theta = cand;
        f = f_cand;
        est.iterations = t + 1;
        if (cfg.record_iterates) est.iterates.push_back(theta);

        TraceRow row;
        row.iter = t + 1;
        row.objectives = Vector::Constant(1, f + cfg.lambda * theta.cwiseAbs().sum());
        row.rho = Vector::Constant(1, 1.0);
        row.ell = ell;
        row.step_norm = delta.norm();
        row.stat = cfg.stop_rule == StopRule::RawGradient
                       ? models::sym_part(family.grad(theta, scope)).cwiseAbs().sum()
                       : ell * delta.cwiseAbs().sum();
        est.trace.push_back(row);

        if (row.stat <= cfg.eps) {
            est.converged = true;
            break;
        }
    }

    est.matrix = theta;
    est.is_pd = needs_pd ? models::is_symmetric_pd(theta) : false;
    return est;
}

GraphEstimate fit_single(Model model, const GroupedDataset& ds, const FitConfig& cfg) {
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    return fit_single_scope(family, -1, cfg);
}

LocalSolutions fit_locals(const models::ModelFamily& family, const FitConfig& cfg) {
    const int K = family.num_groups();
    LocalSolutions local;
    local.theta.resize(K);
    local.raw_loss.resize(K);

    auto solve_one = [&](int k) {
        GraphEstimate est = fit_single_scope(family, k, cfg);
        local.theta[k] = std::move(est.matrix);
        local.raw_loss[k] = family.loss(local.theta[k], k);
    };

    const int workers = std::min(resolve_threads(cfg.threads), K);
    if (workers <= 1) {
        for (int k = 0; k < K; ++k) solve_one(k);
    } else {
        for (int base = 0; base < K; base += workers) {
            std::vector<std::future<void>> wave;
            for (int k = base; k < std::min(K, base + workers); ++k)
                wave.push_back(std::async(std::launch::async, solve_one, k));
            for (auto& j : wave) j.get();
        }
    }
    return local;
}

LocalSolutions fit_locals(Model model, const GroupedDataset& ds, const FitConfig& cfg) {
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    return fit_locals(family, cfg);
}

}  // namespace fairgm
