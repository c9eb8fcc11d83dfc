#pragma once

#include "fairgm/metrics.hpp"
#include "fairgm/solver_moo.hpp"

namespace fairgm {

/// A complete fit for reporting purposes: the estimate itself plus the local
/// graphs and the disparity report evaluated at it. Standard (non-fair) runs
/// also carry locals so that their disparity can be compared against a fair
/// run on the same data.
struct FitRun {
    GraphEstimate estimate;
    LocalSolutions locals;
    DisparityReport disparity;
    bool fair = false;
    double f1_penalized = 0.0;  // pooled loss + lambda l1 at the estimate
    double gamma_used = 0.0;
    double final_residual = 0.0;
    double final_ell = 0.0;
    Vector final_rho;
    double runtime_seconds = 0.0;
};

FitRun run_fit(Model model, const GroupedDataset& ds, const FitConfig& cfg, bool fair);

metrics::RunSummary summarize(const FitRun& run);

}  // namespace fairgm
