#pragma once

#include "fairgm/fairgm.h"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairgm_cli {

// Exit codes: 0 success, 1 usage/validation error, 2 numerical failure.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_api(fairgm_status rc, const std::string& what);

struct SimulateArgs {
    std::string kind;  // gaussian | ising
    int p = 100;
    int q = 5;  // blocks (gaussian)
    int hubs = 3;
    int k = 2;
    std::vector<long> n;  // per-group sample sizes
    int reset_per_group = 2;
    long burn_in = 10000;
    long thinning = 100;
    uint64_t seed = 0;
    std::string out_dir = ".";
    bool dry_run = false;
    std::vector<std::string> argv;
};
int cmd_simulate(const SimulateArgs& args);

struct FitArgs {
    std::string model;  // glasso | covgraph | binnet
    bool fair = false;
    std::string data_path;
    std::string group_col = "group";
    bool standardize = false;
    fairgm_config cfg{};
    bool gamma_set = false;  // --gamma given: disables the automatic estimate
    std::string out_dir = ".";
    bool dry_run = false;
    std::vector<std::string> argv;
};
int cmd_fit(const FitArgs& args);

struct EvaluateArgs {
    std::string run_dir;            // cmd_fit output dir (report.json + theta_hat.csv)
    std::string estimate_path;      // or a bare matrix CSV
    std::string baseline_dir;       // optional standard-run dir
    std::string baseline_estimate;  // or a bare matrix CSV
    std::vector<std::string> truth_paths;
    double lambda = 0.01;
    bool literal_pcee = false;
    std::string out_dir = ".";
    bool dry_run = false;
    std::vector<std::string> argv;
};
int cmd_evaluate(const EvaluateArgs& args);

struct BenchmarkArgs {
    std::string suite;  // sim-glasso | sim-covgraph | sim-binnet | sens-P | sens-N |
                        // sens-ratio | sens-K
    uint64_t seed = 7;
    std::string out_dir = ".";
    double lambda = -1.0;  // <0: suite default
    double eps = -1.0;
    long max_iter = -1;
    std::vector<int> p_grid;
    std::vector<long> n_grid;
    std::vector<double> ratios;
    int k_min = 2, k_max = 6;
    bool dry_run = false;
    std::vector<std::string> argv;
};
int cmd_benchmark(const BenchmarkArgs& args);

struct ValidateTraceArgs {
    std::string trace_path;
    double tolerance = 1e-10;
    std::vector<std::string> argv;
};
int cmd_validate_trace(const ValidateTraceArgs& args);

}  // namespace fairgm_cli
