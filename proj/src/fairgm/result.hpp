#pragma once

#include "fairgm/disparity.hpp"

#include <vector>

namespace fairgm {

/// One accepted iteration. `residual` is the dual subproblem value omega at
/// the accepted prox parameter (0 for plain ISTA runs, which track the
/// composite gradient map in `stat` instead).
struct TraceRow {
    long iter = 0;
    Vector objectives;  // F_k, length M
    double delta_total = 0.0;
    Vector rho;         // simplex weights, length M
    double ell = 0.0;   // accepted prox parameter
    double residual = 0.0;
    double step_norm = 0.0;  // ||Theta_next - Theta||_F
    double stat = 0.0;       // solver stop statistic for this iteration
};

struct GraphEstimate {
    Matrix matrix;
    Model model = Model::GLasso;
    bool is_pd = false;
    bool converged = false;
    long iterations = 0;
    std::vector<TraceRow> trace;
    std::vector<Matrix> iterates;  // populated only when FitConfig::record_iterates
};

}  // namespace fairgm
