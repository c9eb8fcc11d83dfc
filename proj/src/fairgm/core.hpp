#pragma once

#include "fairgm/common.hpp"

#include <cstdint>
#include <vector>

namespace fairgm {

/// Hyperparameters shared by the single- and multi-objective solvers.
///
/// The prox parameter ell plays the role of an inverse step size (zeta = 1/ell).
/// Each outer iteration starts from max(ell0, ell_shrink * last accepted ell)
/// and multiplies by ell_growth until the candidate step is feasible and
/// passes the descent test.
struct FitConfig {
    double lambda = 0.01;        // l1 weight, >= 0
    double tau = 0.01;           // CovGraph log-det weight, > 0
    double gamma = 0.0;          // convexification weight (gamma_C or gamma_I)
    bool gamma_auto = true;      // estimate gamma when applicable; `gamma` overrides if false
    double ell0 = 1e-2;          // initial prox parameter
    double ell_growth = 10.0;    // line-search multiplier, > 1
    double ell_shrink = 0.1;     // optimistic between-iteration decay, > 0
    double eps = 1e-5;           // stationarity tolerance
    long max_iter = 50000;       // iteration cap
    Penalty penalty = Penalty::Square;
    StopRule stop_rule = StopRule::CompositeGradMap;
    std::uint64_t seed = 0;
    bool record_iterates = false;  // keep every iterate (tests / small problems only)
    int threads = 0;               // 0 = decide from hardware and FAIRGM_THREADS

    void validate() const;  // throws InvalidArgument on a bad field
};

/// N x P observations partitioned into K non-empty sensitive groups.
/// Group ids are remapped to contiguous 0..K-1 on ingestion (sorted unique
/// label order); user-facing output restores 1-based ids.
struct GroupedDataset {
    Matrix data;                     // N x P
    std::vector<int> group_of_row;   // length N, values in [0, K)
    int num_groups = 0;
    std::vector<long> group_sizes;   // length K, all positive
    bool binary = false;             // true iff every entry is exactly 0 or 1

    long n() const { return data.rows(); }
    long p() const { return data.cols(); }
    Matrix group_rows(int k) const;  // copy of X_k
};

GroupedDataset validate_dataset(const Matrix& raw, const std::vector<long>& labels,
                                bool require_binary = false);
// String labels are mapped by sorted unique value (numeric order when every
// label parses as an integer, lexicographic otherwise).
GroupedDataset validate_dataset(const Matrix& raw, const std::vector<std::string>& labels,
                                bool require_binary = false);

/// Uncentered second moments S = n^-1 X^T X, pooled and per group, plus the
/// raw cross moments X^T X used by the Ising loss.
struct GroupStats {
    Matrix pooled_S;
    std::vector<Matrix> group_S;
    Matrix pooled_cross;
    std::vector<Matrix> group_cross;
};

GroupStats group_stats(const GroupedDataset& ds);

double penalty_value(Penalty p, double x);
// phi'(x); throws UnsupportedPenaltyGradient for Abs.
double penalty_slope(Penalty p, double x);

/// The M = K+1 objective values of the multi-objective problem, with the
/// per-entry breakdown values[k] = smooth[k] + l1[k] + frob[k].
struct ObjectiveVector {
    Vector values;
    Vector smooth;  // f_k
    Vector l1;      // lambda * ||Theta||_1
    Vector frob;    // gamma * ||Theta||_F^2 (entries k >= 2 of CovGraph/BinNet)
};

// Worker count used for embarrassingly parallel sections: `requested` if
// positive, else hardware_concurrency capped by the FAIRGM_THREADS env var.
int resolve_threads(int requested);

}  // namespace fairgm
