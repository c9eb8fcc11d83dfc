#include "fairgm/metrics.hpp"

#include <cmath>
#include <limits>

namespace fairgm::metrics {

PceeResult pcee(const Matrix& est, const Matrix& truth, double lambda, bool literal_variant) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols())
        throw InvalidArgument("pcee needs matrices of identical shape");
    long hits = 0, edges = 0;
    for (long j = 0; j < truth.rows(); ++j) {
        for (long j2 = 0; j2 < truth.cols(); ++j2) {
            if (std::abs(truth(j, j2)) < lambda) continue;
            ++edges;
            const double e = est(j, j2);
            if (literal_variant ? e >= lambda : std::abs(e) >= lambda) ++hits;
        }
    }
    PceeResult out;
    out.defined = edges > 0;
    out.value = out.defined ? static_cast<double>(hits) / static_cast<double>(edges)
                            : std::numeric_limits<double>::quiet_NaN();
    return out;
}

PceeGapReport pcee_gap_report(const Matrix& est, const std::vector<Matrix>& truths,
                              double lambda, bool literal_variant) {
    PceeGapReport rep;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& truth : truths) {
        rep.per_group.push_back(pcee(est, truth, lambda, literal_variant));
        if (rep.per_group.back().defined) {
            lo = std::min(lo, rep.per_group.back().value);
            hi = std::max(hi, rep.per_group.back().value);
            rep.defined = true;
        }
    }
    rep.gap = rep.defined ? hi - lo : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

EvalReport compare_runs(const RunSummary& standard, const RunSummary& fair) {
    EvalReport rep;
    rep.standard = standard;
    rep.fair = fair;
    rep.pct_f1_defined = standard.f1 != 0.0;
    rep.pct_delta_defined = standard.delta_total != 0.0;
    if (rep.pct_f1_defined)
        rep.pct_f1 = -(fair.f1 - standard.f1) / standard.f1 * 100.0;
    else
        rep.pct_f1 = std::numeric_limits<double>::quiet_NaN();
    if (rep.pct_delta_defined)
        rep.pct_delta = -(fair.delta_total - standard.delta_total) / standard.delta_total * 100.0;
    else
        rep.pct_delta = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace fairgm::metrics
