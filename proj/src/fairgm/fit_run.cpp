#include "fairgm/fit_run.hpp"

#include "fairgm/solver_ista.hpp"

#include <chrono>

namespace fairgm {

FitRun run_fit(Model model, const GroupedDataset& ds, const FitConfig& cfg, bool fair) {
    const auto t0 = std::chrono::steady_clock::now();
    FitRun run;
    run.fair = fair;

    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);

    if (fair && ds.num_groups >= 2) {
        FairFit fit = fit_fair(model, ds, cfg);
        run.estimate = std::move(fit.estimate);
        run.locals = std::move(fit.locals);
        run.disparity = std::move(fit.disparity);
        run.gamma_used = fit.gamma_used;
        run.final_residual = fit.final_residual;
        run.final_ell = fit.final_ell;
        run.final_rho = fit.final_rho;
    } else {
        run.estimate = fit_single_scope(family, -1, cfg);
        if (ds.num_groups >= 2) {
            run.locals = fit_locals(family, cfg);
            run.disparity =
                disparity_report(run.estimate.matrix, run.locals, cfg.penalty, family);
        }
        run.fair = false;
    }

    run.f1_penalized = family.loss(run.estimate.matrix) +
                       cfg.lambda * run.estimate.matrix.cwiseAbs().sum();
    run.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

metrics::RunSummary summarize(const FitRun& run) {
    metrics::RunSummary s;
    s.f1 = run.f1_penalized;
    s.delta_total = run.disparity.total;
    s.runtime_seconds = run.runtime_seconds;
    return s;
}

}  // namespace fairgm
