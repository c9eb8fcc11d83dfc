#include "commands.hpp"

#include "csv.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

namespace fairgm_cli {

using nlohmann::json;
namespace fs = std::filesystem;

void check_api(fairgm_status rc, const std::string& what) {
    if (rc == FAIRGM_OK) return;
    const std::string msg = what + ": " + fairgm_last_error();
    if (rc == FAIRGM_ERROR_INVALID_ARGUMENT || rc == FAIRGM_ERROR_UNSUPPORTED)
        throw UsageError(msg);
    throw NumericalFailure(msg);
}

namespace {

struct DatasetHandle {
    fairgm_dataset* ds = nullptr;
    ~DatasetHandle() { fairgm_dataset_free(ds); }
};
struct FitHandle {
    fairgm_fit* fit = nullptr;
    ~FitHandle() { fairgm_fit_free(fit); }
};
struct TruthHandle {
    fairgm_truth* gt = nullptr;
    ~TruthHandle() { fairgm_truth_free(gt); }
};

int worker_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("FAIRGM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0 && v < static_cast<long>(hw)) hw = static_cast<unsigned>(v);
    }
    return static_cast<int>(hw);
}

fairgm_model model_from_name(const std::string& name) {
    if (name == "glasso") return FAIRGM_MODEL_GLASSO;
    if (name == "covgraph") return FAIRGM_MODEL_COVGRAPH;
    if (name == "binnet") return FAIRGM_MODEL_BINNET;
    throw UsageError("unknown model '" + name + "'");
}

json config_json(const fairgm_config& cfg) {
    return json{{"lambda", cfg.lambda},
                {"tau", cfg.tau},
                {"gamma", cfg.gamma},
                {"gamma_auto", cfg.gamma_auto != 0},
                {"ell0", cfg.ell0},
                {"ell_growth", cfg.ell_growth},
                {"ell_shrink", cfg.ell_shrink},
                {"eps", cfg.eps},
                {"max_iter", cfg.max_iter},
                {"penalty", cfg.penalty == FAIRGM_PENALTY_SQUARE  ? "square"
                            : cfg.penalty == FAIRGM_PENALTY_EXP   ? "exp"
                                                                  : "abs"},
                {"raw_grad_stop", cfg.raw_grad_stop != 0},
                {"seed", cfg.seed},
                {"threads", cfg.threads}};
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << '\n';
}

char hex_digit(uint64_t v) { return "0123456789abcdef"[v & 0xf]; }

std::string hex64(uint64_t v) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = hex_digit(v);
    return s;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& argv, uint64_t seed, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_seconds) {
    json manifest{{"schema_version", 1},
                  {"tool", {{"name", "fairgm"}, {"version", fairgm_version()}}},
                  {"command", command},
                  {"argv", argv},
                  {"seed", seed},
                  {"config", config},
                  {"wall_seconds", wall_seconds}};
    manifest["inputs"] = json::array();
    for (const auto& path : inputs)
        manifest["inputs"].push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64_file(path))}});
    manifest["outputs"] = outputs;
    write_json(out_dir + "/run_manifest.json", manifest);
}

// A fit plus everything the reports need, pulled through the C surface.
struct FitOutcome {
    int p = 0, m = 0, k = 0;
    bool converged = false, is_pd = false;
    long iterations = 0;
    double f1 = 0, delta = 0, gamma = 0, residual = 0, runtime = 0;
    std::vector<double> theta;
    std::vector<std::vector<double>> locals;
    std::vector<double> errors, pairwise;
    double spread = 0;
    std::vector<std::vector<double>> trace;  // raw rows: iter,F..,delta,rho..,ell,resid,step
};

FitOutcome run_fit_capi(fairgm_model model, const std::vector<double>& values,
                        const std::vector<int64_t>& labels, long n, long p,
                        bool require_binary, const fairgm_config& cfg, bool fair) {
    DatasetHandle ds;
    check_api(fairgm_dataset_create(values.data(), labels.data(), n, p,
                                    require_binary ? 1 : 0, &ds.ds),
              "dataset validation failed");
    FitHandle fit;
    check_api(fairgm_fit_run(model, ds.ds, &cfg, fair ? 1 : 0, &fit.fit), "fit failed");

    FitOutcome out;
    out.p = fairgm_fit_p(fit.fit);
    out.m = fairgm_fit_num_objectives(fit.fit);
    out.k = fairgm_dataset_groups(ds.ds);
    out.converged = fairgm_fit_converged(fit.fit) != 0;
    out.is_pd = fairgm_fit_is_pd(fit.fit) != 0;
    out.iterations = fairgm_fit_iterations(fit.fit);
    out.f1 = fairgm_fit_f1(fit.fit);
    out.delta = fairgm_fit_delta_total(fit.fit);
    out.gamma = fairgm_fit_gamma(fit.fit);
    out.residual = fairgm_fit_residual(fit.fit);
    out.runtime = fairgm_fit_runtime_seconds(fit.fit);

    out.theta.resize(static_cast<std::size_t>(out.p) * out.p);
    check_api(fairgm_fit_theta(fit.fit, out.theta.data()), "theta copy failed");
    const int locals = fairgm_fit_num_locals(fit.fit);
    for (int g = 0; g < locals; ++g) {
        std::vector<double> th(static_cast<std::size_t>(out.p) * out.p);
        check_api(fairgm_fit_local_theta(fit.fit, g, th.data()), "local copy failed");
        out.locals.push_back(std::move(th));
    }
    if (locals > 0) {
        out.errors.resize(locals);
        out.pairwise.resize(locals);
        double total = 0;
        check_api(fairgm_fit_disparity(fit.fit, out.errors.data(), out.pairwise.data(), &total,
                                       &out.spread),
                  "disparity copy failed");
    }
    const long rows = fairgm_fit_trace_len(fit.fit);
    out.trace.reserve(rows);
    for (long r = 0; r < rows; ++r) {
        std::vector<double> row(2 * out.m + 5);
        check_api(fairgm_fit_trace_row(fit.fit, r, row.data(),
                                       static_cast<int64_t>(row.size())),
                  "trace copy failed");
        out.trace.push_back(std::move(row));
    }
    return out;
}

void write_trace_csv(const std::string& path, const FitOutcome& out) {
    std::ofstream trace(path);
    if (!trace) throw std::runtime_error("cannot write " + path);
    trace << "iter";
    for (int j = 1; j <= out.m; ++j) trace << ",F_" << j;
    trace << ",delta_total";
    for (int j = 1; j <= out.m; ++j) trace << ",rho_" << j;
    trace << ",ell,residual,step_norm\n";
    for (const auto& row : out.trace) {
        trace << static_cast<long>(row[0]);
        for (std::size_t j = 1; j < row.size(); ++j) trace << ',' << format_full(row[j]);
        trace << '\n';
    }
}

json report_json(const std::string& model, bool fair, const fairgm_config& cfg,
                 const FitOutcome& out) {
    json rep{{"schema_version", 1},
             {"model", model},
             {"fair", fair},
             {"converged", out.converged},
             {"is_pd", out.is_pd},
             {"iterations", out.iterations},
             {"f1", out.f1},
             {"delta_total", out.delta},
             {"gamma_used", out.gamma},
             {"pareto_residual", out.residual},
             {"runtime_seconds", out.runtime},
             {"p", out.p},
             {"num_groups", out.k},
             {"num_objectives", out.m},
             {"config", config_json(cfg)}};
    if (!out.errors.empty()) {
        rep["disparity"] = {{"errors", out.errors},
                            {"pairwise", out.pairwise},
                            {"total", out.delta},
                            {"spread", out.spread}};
    }
    return rep;
}

std::vector<std::string> write_fit_outputs(const std::string& out_dir,
                                           const std::string& model, bool fair,
                                           const fairgm_config& cfg, const FitOutcome& out) {
    std::vector<std::string> written;
    fs::create_directories(out_dir);
    const std::string theta_path = out_dir + "/theta_hat.csv";
    write_matrix_csv(theta_path, out.theta.data(), out.p, out.p);
    written.push_back(theta_path);

    if (!out.locals.empty()) {
        fs::create_directories(out_dir + "/locals");
        for (std::size_t g = 0; g < out.locals.size(); ++g) {
            const std::string path =
                out_dir + "/locals/theta_" + std::to_string(g + 1) + ".csv";
            write_matrix_csv(path, out.locals[g].data(), out.p, out.p);
            written.push_back(path);
        }
    }

    const std::string trace_path = out_dir + "/trace.csv";
    write_trace_csv(trace_path, out);
    written.push_back(trace_path);

    const std::string report_path = out_dir + "/report.json";
    write_json(report_path, report_json(model, fair, cfg, out));
    written.push_back(report_path);
    return written;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.kind != "gaussian" && args.kind != "ising")
        throw UsageError("simulate kind must be gaussian or ising");
    if (static_cast<int>(args.n.size()) != args.k)
        throw UsageError("--n must list one sample size per group");
    for (long nk : args.n)
        if (nk < 1) throw UsageError("sample sizes must be positive");

    TruthHandle truth;
    if (args.kind == "gaussian") {
        check_api(fairgm_gen_block_covariances(args.p, args.q, args.k, args.reset_per_group,
                                               args.seed, &truth.gt),
                  "generator failed");
    } else {
        check_api(fairgm_gen_hub_networks(args.p, args.hubs, args.k, args.seed, &truth.gt),
                  "generator failed");
    }
    if (args.dry_run) {
        std::printf("dry-run ok: %s p=%d k=%d\n", args.kind.c_str(), args.p, args.k);
        return 0;
    }

    fs::create_directories(args.out_dir);
    std::vector<std::string> outputs;
    const long p = args.p;
    std::vector<std::vector<double>> graphs;
    for (int g = 0; g < args.k; ++g) {
        std::vector<double> m(p * p);
        check_api(fairgm_truth_matrix(truth.gt, g, m.data()), "truth copy failed");
        graphs.push_back(std::move(m));
    }

    long total_n = 0;
    for (long nk : args.n) total_n += nk;
    std::vector<double> data(total_n * p);
    std::vector<int> group_ids(total_n);
    long row = 0;
    for (int g = 0; g < args.k; ++g) {
        const uint64_t group_seed = fairgm_split_seed(args.seed, g + 1);
        if (args.kind == "gaussian") {
            check_api(fairgm_sample_mvn(graphs[g].data(), args.p, args.n[g], group_seed,
                                        data.data() + row * p),
                      "sampling failed");
        } else {
            check_api(fairgm_gibbs_sample_ising(graphs[g].data(), args.p, args.n[g],
                                                args.burn_in, args.thinning, group_seed,
                                                data.data() + row * p),
                      "sampling failed");
        }
        for (long i = 0; i < args.n[g]; ++i) group_ids[row + i] = g + 1;
        row += args.n[g];
    }

    const std::string data_path = args.out_dir + "/data.csv";
    write_data_csv(data_path, data.data(), total_n, p, group_ids);
    outputs.push_back(data_path);

    for (int g = 0; g < args.k; ++g) {
        if (args.kind == "gaussian") {
            const std::string sigma_path =
                args.out_dir + "/sigma_" + std::to_string(g + 1) + ".csv";
            write_matrix_csv(sigma_path, graphs[g].data(), p, p);
            outputs.push_back(sigma_path);
            std::vector<double> theta(p * p);
            check_api(fairgm_invert_spd(graphs[g].data(), args.p, theta.data()),
                      "precision ground truth failed");
            const std::string theta_path =
                args.out_dir + "/theta_" + std::to_string(g + 1) + ".csv";
            write_matrix_csv(theta_path, theta.data(), p, p);
            outputs.push_back(theta_path);
        } else {
            const std::string theta_path =
                args.out_dir + "/theta_" + std::to_string(g + 1) + ".csv";
            write_matrix_csv(theta_path, graphs[g].data(), p, p);
            outputs.push_back(theta_path);
        }
    }

    json config{{"kind", args.kind}, {"p", args.p},     {"k", args.k},
                {"n", args.n},       {"seed", args.seed}};
    if (args.kind == "gaussian") {
        config["q"] = args.q;
        config["reset_per_group"] = args.reset_per_group;
    } else {
        config["hubs"] = args.hubs;
        config["burn_in"] = args.burn_in;
        config["thinning"] = args.thinning;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out_dir, "simulate", args.argv, args.seed, config, {}, outputs, wall);
    std::printf("simulate %s: wrote %zu files to %s\n", args.kind.c_str(), outputs.size() + 1,
                args.out_dir.c_str());
    return 0;
}

int cmd_fit(const FitArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const fairgm_model model = model_from_name(args.model);
    const bool binary = model == FAIRGM_MODEL_BINNET;
    if (args.standardize && binary)
        throw UsageError("--standardize is not valid for binary (binnet) data");

    const DataTable table = read_csv(args.data_path);
    LoadedData data = split_group_column(table, args.group_col);
    if (args.standardize) standardize_columns(data);

    // Map string labels to contiguous ids, numeric-aware, sorted order.
    std::vector<int64_t> labels(data.n);
    {
        bool all_numeric = true;
        std::vector<long> numeric(data.n);
        for (long i = 0; i < data.n && all_numeric; ++i) {
            try {
                std::size_t pos = 0;
                numeric[i] = std::stol(data.group_labels[i], &pos);
                all_numeric = pos == data.group_labels[i].size();
            } catch (const std::exception&) {
                all_numeric = false;
            }
        }
        if (all_numeric) {
            for (long i = 0; i < data.n; ++i) labels[i] = numeric[i];
        } else {
            std::vector<std::string> sorted = data.group_labels;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (long i = 0; i < data.n; ++i)
                labels[i] = static_cast<int64_t>(
                    std::lower_bound(sorted.begin(), sorted.end(), data.group_labels[i]) -
                    sorted.begin());
        }
    }

    if (args.dry_run) {
        DatasetHandle ds;
        check_api(fairgm_dataset_create(data.values.data(), labels.data(), data.n, data.p,
                                        binary ? 1 : 0, &ds.ds),
                  "dataset validation failed");
        std::printf("dry-run ok: %ld rows, %ld features, %d groups\n", data.n, data.p,
                    fairgm_dataset_groups(ds.ds));
        return 0;
    }

    const FitOutcome out = run_fit_capi(model, data.values, labels, data.n, data.p, binary,
                                        args.cfg, args.fair);
    auto outputs = write_fit_outputs(args.out_dir, args.model, args.fair, args.cfg, out);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json config = config_json(args.cfg);
    config["fair"] = args.fair;
    config["standardize"] = args.standardize;
    config["group_col"] = args.group_col;
    write_manifest(args.out_dir, "fit", args.argv, args.cfg.seed, config, {args.data_path},
                   outputs, wall);
    std::printf("fit %s (%s): converged=%s iterations=%ld F1=%.6g delta=%.6g -> %s\n",
                args.model.c_str(), args.fair ? "fair" : "standard",
                out.converged ? "true" : "false", out.iterations, out.f1, out.delta,
                args.out_dir.c_str());
    return 0;
}

namespace {

struct LoadedRun {
    bool has_report = false;
    json report;
    std::vector<double> theta;
    long p = 0;
};

LoadedRun load_run(const std::string& run_dir, const std::string& estimate_path) {
    LoadedRun run;
    if (!run_dir.empty()) {
        std::ifstream in(run_dir + "/report.json");
        if (!in) throw UsageError("missing " + run_dir + "/report.json");
        in >> run.report;
        run.has_report = true;
        run.theta = read_matrix_csv(run_dir + "/theta_hat.csv", run.p);
    } else if (!estimate_path.empty()) {
        run.theta = read_matrix_csv(estimate_path, run.p);
    }
    return run;
}

}  // namespace

int cmd_evaluate(const EvaluateArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.run_dir.empty() && args.estimate_path.empty())
        throw UsageError("evaluate needs --run or --estimate");

    LoadedRun primary = load_run(args.run_dir, args.estimate_path);
    LoadedRun baseline = load_run(args.baseline_dir, args.baseline_estimate);

    std::vector<std::vector<double>> truths;
    for (const auto& path : args.truth_paths) {
        long tp = 0;
        auto truth = read_matrix_csv(path, tp);
        if (tp != primary.p)
            throw UsageError("truth " + path + " has size " + std::to_string(tp) +
                             ", estimate has " + std::to_string(primary.p));
        truths.push_back(std::move(truth));
    }
    if (args.dry_run) {
        std::printf("dry-run ok: estimate p=%ld, %zu truths\n", primary.p, truths.size());
        return 0;
    }

    json eval{{"schema_version", 1}, {"lambda", args.lambda}};
    auto pcee_block = [&](const LoadedRun& run) {
        json block = json::array();
        double lo = 1e300, hi = -1e300;
        bool any = false;
        for (std::size_t g = 0; g < truths.size(); ++g) {
            double value = 0, value_literal = 0;
            int defined = 0, defined_literal = 0;
            check_api(fairgm_pcee(run.theta.data(), truths[g].data(),
                                  static_cast<int>(run.p), args.lambda, 0, &value, &defined),
                      "pcee failed");
            check_api(fairgm_pcee(run.theta.data(), truths[g].data(),
                                  static_cast<int>(run.p), args.lambda, 1, &value_literal,
                                  &defined_literal),
                      "pcee failed");
            json entry{{"group", g + 1},
                       {"defined", defined != 0},
                       {"pcee", defined ? json(value) : json()},
                       {"pcee_literal", defined_literal ? json(value_literal) : json()}};
            block.push_back(entry);
            if (defined) {
                lo = std::min(lo, value);
                hi = std::max(hi, value);
                any = true;
            }
        }
        json out{{"per_group", block}};
        if (any) out["gap"] = hi - lo;
        return out;
    };

    // The default PCEE thresholds |est| >= lambda; the printed formula's signed
    // variant is reported alongside so the discrepancy stays visible.
    if (!truths.empty()) {
        eval["pcee"] = pcee_block(primary);
        if (!baseline.theta.empty()) eval["pcee_baseline"] = pcee_block(baseline);
        eval["pcee_variant"] = args.literal_pcee ? "literal" : "absolute";
    }

    double f1_fair = NAN, delta_fair = NAN, rt_fair = NAN;
    if (primary.has_report) {
        f1_fair = primary.report["f1"].get<double>();
        delta_fair = primary.report["delta_total"].get<double>();
        rt_fair = primary.report["runtime_seconds"].get<double>();
        eval["run"] = {{"f1", f1_fair},
                       {"delta_total", delta_fair},
                       {"runtime_seconds", rt_fair},
                       {"fair", primary.report["fair"]}};
    }
    if (baseline.has_report && primary.has_report) {
        const double f1_std = baseline.report["f1"].get<double>();
        const double delta_std = baseline.report["delta_total"].get<double>();
        double pct_f1 = 0, pct_delta = 0;
        int f1_def = 0, delta_def = 0;
        check_api(fairgm_compare_runs(f1_std, f1_fair, delta_std, delta_fair, &pct_f1, &f1_def,
                                      &pct_delta, &delta_def),
                  "comparison failed");
        eval["baseline"] = {{"f1", f1_std},
                            {"delta_total", delta_std},
                            {"runtime_seconds", baseline.report["runtime_seconds"]}};
        eval["tradeoff"] = {{"pct_f1", f1_def ? json(pct_f1) : json()},
                            {"pct_delta", delta_def ? json(pct_delta) : json()}};
    }

    fs::create_directories(args.out_dir);
    const std::string eval_path = args.out_dir + "/eval.json";
    write_json(eval_path, eval);

    // Table shaped like the paper's outcome tables.
    const std::string table_path = args.out_dir + "/table.csv";
    {
        std::ofstream tbl(table_path);
        tbl << "f1_gm,f1_fair,pct_f1,delta_gm,delta_fair,pct_delta,runtime_gm,runtime_fair\n";
        auto cell = [&](const json& root, const char* a, const char* b) -> std::string {
            if (!root.contains(a) || root[a].is_null() || !root[a].contains(b) ||
                root[a][b].is_null())
                return "";
            return format_full(root[a][b].get<double>());
        };
        tbl << cell(eval, "baseline", "f1") << ',' << cell(eval, "run", "f1") << ','
            << cell(eval, "tradeoff", "pct_f1") << ',' << cell(eval, "baseline", "delta_total")
            << ',' << cell(eval, "run", "delta_total") << ','
            << cell(eval, "tradeoff", "pct_delta") << ','
            << cell(eval, "baseline", "runtime_seconds") << ','
            << cell(eval, "run", "runtime_seconds") << '\n';
    }

    std::vector<std::string> inputs = args.truth_paths;
    if (!args.run_dir.empty()) inputs.push_back(args.run_dir + "/theta_hat.csv");
    if (!args.estimate_path.empty()) inputs.push_back(args.estimate_path);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out_dir, "evaluate", args.argv, 0,
                   json{{"lambda", args.lambda}, {"literal_pcee", args.literal_pcee}}, inputs,
                   {eval_path, table_path}, wall);
    std::printf("evaluate: wrote %s\n", eval_path.c_str());
    return 0;
}

int cmd_validate_trace(const ValidateTraceArgs& args) {
    const DataTable table = read_csv(args.trace_path);
    std::vector<std::size_t> f_cols;
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (table.columns[j].rfind("F_", 0) == 0) f_cols.push_back(j);
    if (f_cols.empty()) throw UsageError("no F_k columns in " + args.trace_path);

    long violations = 0;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        for (std::size_t j : f_cols) {
            const double prev = std::stod(table.rows[i - 1][j]);
            const double cur = std::stod(table.rows[i][j]);
            if (cur > prev + args.tolerance * (1.0 + std::abs(prev))) {
                ++violations;
                std::fprintf(stderr, "row %zu: %s increased %.17g -> %.17g\n", i,
                             table.columns[j].c_str(), prev, cur);
            }
        }
    }
    if (violations > 0) {
        std::fprintf(stderr, "validate-trace: %ld monotonicity violations\n", violations);
        return 2;
    }
    std::printf("validate-trace: %zu rows, %zu objectives, monotone within %g\n",
                table.rows.size(), f_cols.size(), args.tolerance);
    return 0;
}

namespace {

struct CellSpec {
    std::string name;
    std::string model;  // glasso | covgraph | binnet
    int p = 100;
    int q = 5;
    int hubs = 3;
    int k = 2;
    int reset_per_group = 2;
    std::vector<long> n;
    fairgm_config cfg{};
    uint64_t seed = 0;
};

struct CellResult {
    std::string name;
    bool ok = false;
    std::string error;
    double f1_gm = NAN, f1_fair = NAN, pct_f1 = NAN;
    double delta_gm = NAN, delta_fair = NAN, pct_delta = NAN;
    double pcee_gap_gm = NAN, pcee_gap_fair = NAN;
    double runtime_gm = NAN, runtime_fair = NAN;
};

CellResult run_cell(const CellSpec& cell) {
    CellResult res;
    res.name = cell.name;
    try {
        const long p = cell.p;
        const bool binary = cell.model == "binnet";
        TruthHandle truth;
        if (binary) {
            check_api(fairgm_gen_hub_networks(cell.p, cell.hubs, cell.k, cell.seed, &truth.gt),
                      "generator failed");
        } else {
            check_api(fairgm_gen_block_covariances(cell.p, cell.q, cell.k,
                                                   cell.reset_per_group, cell.seed, &truth.gt),
                      "generator failed");
        }
        std::vector<std::vector<double>> graphs;
        for (int g = 0; g < cell.k; ++g) {
            std::vector<double> m(p * p);
            check_api(fairgm_truth_matrix(truth.gt, g, m.data()), "truth copy failed");
            graphs.push_back(std::move(m));
        }
        // PCEE reference: precision matrices for the Gaussian models, the
        // network itself for Ising.
        std::vector<std::vector<double>> reference = graphs;
        if (cell.model == "glasso") {
            for (int g = 0; g < cell.k; ++g)
                check_api(fairgm_invert_spd(graphs[g].data(), cell.p, reference[g].data()),
                          "precision ground truth failed");
        }

        long total_n = 0;
        for (long nk : cell.n) total_n += nk;
        std::vector<double> data(total_n * p);
        std::vector<int64_t> labels(total_n);
        long row = 0;
        for (int g = 0; g < cell.k; ++g) {
            const uint64_t group_seed = fairgm_split_seed(cell.seed, g + 1);
            if (binary) {
                check_api(fairgm_gibbs_sample_ising(graphs[g].data(), cell.p, cell.n[g], 10000,
                                                    100, group_seed, data.data() + row * p),
                          "sampling failed");
            } else {
                check_api(fairgm_sample_mvn(graphs[g].data(), cell.p, cell.n[g], group_seed,
                                            data.data() + row * p),
                          "sampling failed");
            }
            for (long i = 0; i < cell.n[g]; ++i) labels[row + i] = g + 1;
            row += cell.n[g];
        }

        const fairgm_model model = model_from_name(cell.model);
        const FitOutcome gm =
            run_fit_capi(model, data, labels, total_n, p, binary, cell.cfg, false);
        const FitOutcome fair =
            run_fit_capi(model, data, labels, total_n, p, binary, cell.cfg, true);

        res.f1_gm = gm.f1;
        res.f1_fair = fair.f1;
        res.delta_gm = gm.delta;
        res.delta_fair = fair.delta;
        res.runtime_gm = gm.runtime;
        res.runtime_fair = fair.runtime;
        double pct_f1 = 0, pct_delta = 0;
        int f1_def = 0, delta_def = 0;
        check_api(fairgm_compare_runs(gm.f1, fair.f1, gm.delta, fair.delta, &pct_f1, &f1_def,
                                      &pct_delta, &delta_def),
                  "comparison failed");
        res.pct_f1 = f1_def ? pct_f1 : NAN;
        res.pct_delta = delta_def ? pct_delta : NAN;

        auto gap_of = [&](const FitOutcome& out) {
            double lo = 1e300, hi = -1e300;
            bool any = false;
            for (int g = 0; g < cell.k; ++g) {
                double value = 0;
                int defined = 0;
                check_api(fairgm_pcee(out.theta.data(), reference[g].data(), cell.p,
                                      cell.cfg.lambda, 0, &value, &defined),
                          "pcee failed");
                if (defined) {
                    lo = std::min(lo, value);
                    hi = std::max(hi, value);
                    any = true;
                }
            }
            return any ? hi - lo : NAN;
        };
        res.pcee_gap_gm = gap_of(gm);
        res.pcee_gap_fair = gap_of(fair);
        res.ok = true;
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    return res;
}

}  // namespace

int cmd_benchmark(const BenchmarkArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    fairgm_config base;
    fairgm_config_init(&base);
    base.seed = args.seed;

    std::vector<CellSpec> cells;
    auto gaussian_cell = [&](const std::string& name, const std::string& model, int p, int q,
                             int reset, std::vector<long> n, double lambda) {
        CellSpec cell;
        cell.name = name;
        cell.model = model;
        cell.p = p;
        cell.q = q;
        cell.reset_per_group = reset;
        cell.k = static_cast<int>(n.size());
        cell.n = std::move(n);
        cell.cfg = base;
        cell.cfg.lambda = lambda;
        cell.seed = args.seed;
        cells.push_back(std::move(cell));
    };

    if (args.suite == "sim-glasso") {
        gaussian_cell("sim-glasso", "glasso", 100, 5, 2, {1000, 1000}, 0.01);
    } else if (args.suite == "sim-covgraph") {
        gaussian_cell("sim-covgraph", "covgraph", 100, 5, 2, {1000, 1000}, 0.01);
        cells.back().cfg.tau = 0.01;
    } else if (args.suite == "sim-binnet") {
        CellSpec cell;
        cell.name = "sim-binnet";
        cell.model = "binnet";
        cell.p = 50;
        cell.hubs = 3;
        cell.k = 2;
        cell.n = {500, 1000};
        cell.cfg = base;
        cell.cfg.lambda = 20.0;
        cell.cfg.eps = 1e-2;
        cell.seed = args.seed;
        cells.push_back(std::move(cell));
    } else if (args.suite == "sens-P") {
        std::vector<int> grid = args.p_grid.empty() ? std::vector<int>{50, 100, 200}
                                                    : args.p_grid;
        for (int p : grid)
            gaussian_cell("P=" + std::to_string(p), "glasso", p, 5, 1, {1000, 1000}, 0.01);
    } else if (args.suite == "sens-N") {
        std::vector<long> grid = args.n_grid.empty() ? std::vector<long>{100, 250, 500}
                                                     : args.n_grid;
        for (long n : grid)
            gaussian_cell("N=" + std::to_string(n), "glasso", 50, 5, 1, {n, n}, 0.01);
    } else if (args.suite == "sens-ratio") {
        std::vector<double> grid =
            args.ratios.empty() ? std::vector<double>{1.0, 4.0, 10.0} : args.ratios;
        for (double r : grid) {
            const long n1 = static_cast<long>(std::lround(100.0 * r));
            gaussian_cell("ratio=" + std::to_string(r).substr(0, 4), "glasso", 50, 5, 1,
                          {n1, 100}, 0.01);
        }
    } else if (args.suite == "sens-K") {
        for (int k = args.k_min; k <= args.k_max; ++k)
            gaussian_cell("K=" + std::to_string(k), "glasso", 100, 10, 1,
                          std::vector<long>(k, 1000), 0.01);
    } else {
        throw UsageError("unknown suite '" + args.suite + "'");
    }

    for (auto& cell : cells) {
        if (args.lambda >= 0) cell.cfg.lambda = args.lambda;
        if (args.eps > 0) cell.cfg.eps = args.eps;
        if (args.max_iter > 0) cell.cfg.max_iter = args.max_iter;
    }

    if (args.dry_run) {
        std::printf("dry-run ok: suite %s with %zu cells\n", args.suite.c_str(), cells.size());
        return 0;
    }

    fs::create_directories(args.out_dir);
    std::vector<CellResult> results(cells.size());
    {
        // Independent cells on a bounded worker pool; results land by index.
        const int workers =
            std::min<int>(worker_budget(), static_cast<int>(cells.size()));
        std::mutex mtx;
        std::size_t next = 0;
        auto drain = [&] {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard lock(mtx);
                    if (next >= cells.size()) return;
                    mine = next++;
                }
                results[mine] = run_cell(cells[mine]);
            }
        };
        if (workers <= 1) {
            drain();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
            for (auto& th : pool) th.join();
        }
    }

    const std::string table_path = args.out_dir + "/table.csv";
    {
        std::ofstream tbl(table_path);
        tbl << "cell,ok,f1_gm,f1_fair,pct_f1,delta_gm,delta_fair,pct_delta,"
               "pcee_gap_gm,pcee_gap_fair,runtime_gm,runtime_fair\n";
        for (const auto& r : results) {
            tbl << r.name << ',' << (r.ok ? "1" : "0") << ',' << format_full(r.f1_gm) << ','
                << format_full(r.f1_fair) << ',' << format_full(r.pct_f1) << ','
                << format_full(r.delta_gm) << ',' << format_full(r.delta_fair) << ','
                << format_full(r.pct_delta) << ',' << format_full(r.pcee_gap_gm) << ','
                << format_full(r.pcee_gap_fair) << ',' << format_full(r.runtime_gm) << ','
                << format_full(r.runtime_fair) << '\n';
        }
    }

    json summary{{"schema_version", 1}, {"suite", args.suite}, {"seed", args.seed}};
    summary["cells"] = json::array();
    bool all_ok = true;
    for (const auto& r : results) {
        json cell{{"name", r.name}, {"ok", r.ok}};
        if (!r.ok) {
            cell["error"] = r.error;
            all_ok = false;
        } else {
            cell["pct_f1"] = r.pct_f1;
            cell["pct_delta"] = r.pct_delta;
            cell["pcee_gap_gm"] = r.pcee_gap_gm;
            cell["pcee_gap_fair"] = r.pcee_gap_fair;
        }
        summary["cells"].push_back(cell);
    }
    const std::string summary_path = args.out_dir + "/summary.json";
    write_json(summary_path, summary);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out_dir, "benchmark", args.argv, args.seed,
                   json{{"suite", args.suite}}, {}, {table_path, summary_path}, wall);
    for (const auto& r : results) {
        if (r.ok)
            std::printf("%-12s pct_f1=%+.3f%% pct_delta=%+.2f%% pcee_gap %.4f -> %.4f\n",
                        r.name.c_str(), r.pct_f1, r.pct_delta, r.pcee_gap_gm,
                        r.pcee_gap_fair);
        else
            std::printf("%-12s FAILED: %s\n", r.name.c_str(), r.error.c_str());
    }
    if (!all_ok) throw NumericalFailure("one or more benchmark cells failed");
    std::printf("benchmark %s: wrote %s\n", args.suite.c_str(), table_path.c_str());
    return 0;
}

}  // namespace fairgm_cli
