#pragma once

#include "fairgm/result.hpp"

namespace fairgm {

/// Elementwise shrinkage sign(x) max(|x| - t, 0).
Matrix soft_threshold(const Matrix& m, double t);

/// Single-objective proximal gradient (the baseline and local-graph solver).
/// Gradient step with zeta = 1/ell, then soft-thresholding with lambda/ell;
/// ell grows by ell_growth until the candidate is feasible (PD for
/// GLasso/CovGraph) and satisfies the quadratic descent bound. Stops on the
/// composite gradient map ell * ||Theta+ - Theta||_1 <= eps (or the raw
/// smooth-gradient norm under StopRule::RawGradient), else runs to max_iter
/// and returns the last iterate flagged not-converged.
GraphEstimate fit_single(Model model, const GroupedDataset& ds, const FitConfig& cfg);

/// fit_single on one scope of a prepared family: -1 pools all rows, 0..K-1
/// restricts to one group.
GraphEstimate fit_single_scope(const models::ModelFamily& family, int scope,
                               const FitConfig& cfg);

/// Local graph estimates for every group, raw losses cached. The K solves are
/// independent and run on the configured worker budget.
LocalSolutions fit_locals(Model model, const GroupedDataset& ds, const FitConfig& cfg);
LocalSolutions fit_locals(const models::ModelFamily& family, const FitConfig& cfg);

}  // namespace fairgm
