#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>

using namespace fairgm_cli;

namespace {

std::vector<std::string> collect_argv(int argc, char** argv) {
    return std::vector<std::string>(argv, argv + argc);
}

void add_config_flags(CLI::App* cmd, FitArgs& args) {
    fairgm_config_init(&args.cfg);
    cmd->add_option("--lambda", args.cfg.lambda, "l1 penalty weight")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tau", args.cfg.tau, "CovGraph log-det weight");
    cmd->add_option("--gamma", args.cfg.gamma,
                    "convexification weight (disables the automatic estimate)");
    cmd->add_option("--ell0", args.cfg.ell0, "initial prox parameter");
    cmd->add_option("--ell-growth", args.cfg.ell_growth, "line-search growth factor");
    cmd->add_option("--ell-shrink", args.cfg.ell_shrink, "between-iteration decay");
    cmd->add_option("--eps", args.cfg.eps, "stationarity tolerance");
    cmd->add_option("--max-iter", args.cfg.max_iter, "iteration cap");
    cmd->add_option("--penalty", [&args](const std::vector<std::string>& vals) {
            const std::string& v = vals.front();
            if (v == "square") args.cfg.penalty = FAIRGM_PENALTY_SQUARE;
            else if (v == "exp") args.cfg.penalty = FAIRGM_PENALTY_EXP;
            else if (v == "abs") args.cfg.penalty = FAIRGM_PENALTY_ABS;
            else return false;
            return true;
        }, "disparity penalty: square | exp | abs")->expected(1);
    cmd->add_flag("--raw-grad-stop", [&args](std::int64_t) { args.cfg.raw_grad_stop = 1; },
                  "stop standard fits on the raw gradient norm");
    cmd->add_option("--seed", args.cfg.seed, "RNG seed recorded in the manifest");
    cmd->add_option("--threads", args.cfg.threads, "worker cap (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairgm: fairness-aware estimation of sparse graphical models"};
    app.require_subcommand(1);
    const auto all_argv = collect_argv(argc, argv);

    SimulateArgs sim;
    sim.argv = all_argv;
    auto* simulate = app.add_subcommand("simulate", "generate synthetic ground truth and data");
    simulate->add_option("kind", sim.kind, "gaussian | ising")->required();
    simulate->add_option("--p", sim.p, "number of variables");
    simulate->add_option("--q", sim.q, "diagonal blocks (gaussian)");
    simulate->add_option("--hubs", sim.hubs, "hub nodes (ising)");
    simulate->add_option("--k", sim.k, "number of groups");
    simulate->add_option("--n", sim.n, "per-group sample sizes (comma separated)")
        ->required()
        ->delimiter(',');
    simulate->add_option("--reset-per-group", sim.reset_per_group,
                         "identity blocks per subsequent group (gaussian)");
    simulate->add_option("--burn-in", sim.burn_in, "Gibbs burn-in sweeps");
    simulate->add_option("--thinning", sim.thinning, "Gibbs collection stride");
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--out", sim.out_dir, "output directory");
    simulate->add_flag("--dry-run", sim.dry_run, "validate inputs without computing");

    FitArgs fit;
    fit.argv = all_argv;
    auto* fit_cmd = app.add_subcommand("fit", "estimate a graphical model");
    fit_cmd->add_option("model", fit.model, "glasso | covgraph | binnet")->required();
    auto* fair_flag = fit_cmd->add_flag("--fair", fit.fair, "multi-objective fair estimation");
    fit_cmd->add_flag("--standard", "single-objective baseline (default)")
        ->excludes(fair_flag);
    fit_cmd->add_option("--data", fit.data_path, "input data CSV")->required();
    fit_cmd->add_option("--group-col", fit.group_col, "name of the group column");
    fit_cmd->add_flag("--standardize", fit.standardize,
                      "zero mean, unit variance per column before grouping");
    fit_cmd->add_option("--out", fit.out_dir, "output directory");
    fit_cmd->add_flag("--dry-run", fit.dry_run, "validate inputs without computing");
    add_config_flags(fit_cmd, fit);

    EvaluateArgs eval;
    eval.argv = all_argv;
    auto* evaluate = app.add_subcommand("evaluate", "score estimates against ground truth");
    evaluate->add_option("--run", eval.run_dir, "fit output directory (primary run)");
    evaluate->add_option("--estimate", eval.estimate_path, "bare estimate matrix CSV");
    evaluate->add_option("--baseline", eval.baseline_dir, "fit output directory (baseline)");
    evaluate->add_option("--baseline-estimate", eval.baseline_estimate,
                         "bare baseline matrix CSV");
    evaluate->add_option("--truth", eval.truth_paths, "per-group truth matrix CSVs")
        ->delimiter(',');
    evaluate->add_option("--lambda", eval.lambda, "PCEE threshold");
    evaluate->add_flag("--literal-pcee", eval.literal_pcee,
                       "use the signed estimate test instead of |estimate| >= lambda");
    evaluate->add_option("--out", eval.out_dir, "output directory");
    evaluate->add_flag("--dry-run", eval.dry_run, "validate inputs without computing");

    BenchmarkArgs bench;
    bench.argv = all_argv;
    auto* benchmark = app.add_subcommand("benchmark", "end-to-end experiment suites");
    benchmark
        ->add_option("suite", bench.suite,
                     "sim-glasso | sim-covgraph | sim-binnet | sens-P | sens-N | sens-ratio | "
                     "sens-K")
        ->required();
    benchmark->add_option("--seed", bench.seed, "base RNG seed");
    benchmark->add_option("--out", bench.out_dir, "output directory");
    benchmark->add_option("--lambda", bench.lambda, "override the suite's lambda");
    benchmark->add_option("--eps", bench.eps, "override the suite's tolerance");
    benchmark->add_option("--max-iter", bench.max_iter, "override the suite's iteration cap");
    benchmark->add_option("--p-grid", bench.p_grid, "sens-P grid")->delimiter(',');
    benchmark->add_option("--n-grid", bench.n_grid, "sens-N grid")->delimiter(',');
    benchmark->add_option("--ratios", bench.ratios, "sens-ratio grid")->delimiter(',');
    benchmark->add_option("--k-min", bench.k_min, "sens-K start");
    benchmark->add_option("--k-max", bench.k_max, "sens-K end");
    benchmark->add_flag("--dry-run", bench.dry_run, "validate inputs without computing");

    ValidateTraceArgs vt;
    vt.argv = all_argv;
    auto* validate = app.add_subcommand("validate-trace",
                                        "check a trace.csv for per-objective monotonicity");
    validate->add_option("trace", vt.trace_path, "trace.csv from a fit run")->required();
    validate->add_option("--tolerance", vt.tolerance, "relative slack");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (fit_cmd->parsed()) {
            if (fit_cmd->count("--gamma") > 0) fit.cfg.gamma_auto = 0;
            return cmd_fit(fit);
        }
        if (evaluate->parsed()) return cmd_evaluate(eval);
        if (benchmark->parsed()) return cmd_benchmark(bench);
        if (validate->parsed()) return cmd_validate_trace(vt);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const NumericalFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
