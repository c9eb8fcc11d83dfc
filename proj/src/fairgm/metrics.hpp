#pragma once

#include "fairgm/common.hpp"

#include <vector>

namespace fairgm::metrics {

struct PceeResult {
    double value = 0.0;
    bool defined = false;  // false when the truth has no edges at level lambda
};

/// Proportion of correctly estimated edges at threshold lambda (diagonal
/// included). The default counts an estimated edge when |est_{jj'}| >= lambda;
/// `literal_variant` keeps the printed signed test est_{jj'} >= lambda, under
/// which negative estimated edges never count.
PceeResult pcee(const Matrix& est, const Matrix& truth, double lambda,
                bool literal_variant = false);

struct PceeGapReport {
    std::vector<PceeResult> per_group;
    double gap = 0.0;  // max - min over the defined entries
    bool defined = false;
};

PceeGapReport pcee_gap_report(const Matrix& est, const std::vector<Matrix>& truths,
                              double lambda, bool literal_variant = false);

struct RunSummary {
    double f1 = 0.0;
    double delta_total = 0.0;
    double runtime_seconds = 0.0;
};

/// Trade-off percentages, sign convention of the paper's comparison tables:
/// positive means the fair run improved the quantity.
struct EvalReport {
    RunSummary standard;
    RunSummary fair;
    double pct_f1 = 0.0;
    double pct_delta = 0.0;
    bool pct_f1_defined = false;    // false when the baseline F1 is 0
    bool pct_delta_defined = false; // false when the baseline Delta is 0
};

EvalReport compare_runs(const RunSummary& standard, const RunSummary& fair);

}  // namespace fairgm::metrics
