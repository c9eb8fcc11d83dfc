#include "fairgm/solver_moo.hpp"

#include "fairgm/prox_detail.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fairgm {

Vector project_simplex(const Vector& v) {
    const long m = v.size();
    if (m == 0) throw InvalidArgument("cannot project an empty vector");
    if (m == 1) return Vector::Constant(1, 1.0);
    double lo = v.minCoeff() - 1.0;
    double hi = v.maxCoeff();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double mass = (v.array() - mid).cwiseMax(0.0).sum();
        (mass > 1.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    Vector p = (v.array() - tau).cwiseMax(0.0);
    p /= p.sum();
    return p;
}

namespace {

double l1_norm(const Matrix& m) { return m.cwiseAbs().sum(); }

// omega(rho) for fixed combined gradient G = sum rho_k grad_k:
//   min_y [ lambda||y||_1 + ell/2 ||x - y||^2 ]  -  ||G||^2 / (2 ell)  -  lambda||theta||_1
// with x = theta - G/ell and the minimizer y = soft_threshold(x, lambda/ell).
struct DualEval {
    Matrix phi;
    double omega;
};

DualEval eval_dual(const Matrix& theta, const Matrix& combo, double ell, double lambda,
                   double g_theta) {
    DualEval out;
    const Matrix x = theta - combo / ell;
    out.phi = soft_threshold(x, lambda / ell);
    out.omega = lambda * l1_norm(out.phi) + 0.5 * ell * (x - out.phi).squaredNorm() -
                combo.squaredNorm() / (2.0 * ell) - g_theta;
    return out;
}

}  // namespace

SubproblemSolution solve_subproblem(const Matrix& theta, const std::vector<Matrix>& grads,
                                    double ell, double lambda, const Vector& rho_init) {
    if (!(ell > 0.0)) throw InvalidArgument("subproblem needs ell > 0");
    const int m = static_cast<int>(grads.size());
    if (m == 0) throw InvalidArgument("subproblem needs at least one gradient");
    for (const auto& g : grads) {
        if (!g.allFinite()) throw InvalidArgument("non-finite gradient entries");
        if (g.rows() != theta.rows() || g.cols() != theta.cols())
            throw InvalidArgument("gradient shape mismatch");
    }
    const double g_theta = lambda * l1_norm(theta);

    SubproblemSolution sol;
    if (m == 1) {
        sol.rho = Vector::Constant(1, 1.0);
        sol.phi_next = detail::prox_step(theta, grads[0], ell, lambda);
        const Matrix delta = sol.phi_next - theta;
        sol.varphi = (grads[0].array() * delta.array()).sum() + lambda * l1_norm(sol.phi_next) -
                     g_theta + 0.5 * ell * delta.squaredNorm();
        const Matrix x = theta - grads[0] / ell;
        sol.omega = lambda * l1_norm(sol.phi_next) +
                    0.5 * ell * (x - sol.phi_next).squaredNorm() -
                    grads[0].squaredNorm() / (2.0 * ell) - g_theta;
        return sol;
    }

    Matrix gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            gram(i, j) = gram(j, i) = (grads[i].array() * grads[j].array()).sum();
    const double lip = Eigen::SelfAdjointEigenSolver<Matrix>(gram).eigenvalues().maxCoeff() / ell;
    const double step = lip > 0.0 ? 1.0 / lip : 1.0;

    // omega's ascent direction and the primal value share the same inner
    // products: d omega / d rho_k = <grad_k, Phi*(rho) - Theta> is the linear
    // part of psi_k at Phi*.
    auto eval_point = [&](const Vector& r, Vector& ascent, double& varphi) {
        Matrix combo = r[0] * grads[0];
        for (int k = 1; k < m; ++k) combo.noalias() += r[k] * grads[k];
        const DualEval cur = eval_dual(theta, combo, ell, lambda, g_theta);
        const Matrix delta = cur.phi - theta;
        for (int k = 0; k < m; ++k) ascent[k] = (grads[k].array() * delta.array()).sum();
        varphi = ascent.maxCoeff() + lambda * l1_norm(cur.phi) - g_theta +
                 0.5 * ell * delta.squaredNorm();
        return cur.omega;
    };

    // Accelerated projected ascent with restart on non-monotone steps. The
    // duality-gap target sits well inside the 1e-6 contract on
    // SubproblemSolution.
    Vector rho = rho_init.size() == m ? project_simplex(rho_init)
                                      : Vector::Constant(m, 1.0 / m);
    Vector extra = rho;  // extrapolated point
    Vector best_rho = rho;
    double best_omega = -std::numeric_limits<double>::infinity();
    double prev_omega = -std::numeric_limits<double>::infinity();
    double t_accel = 1.0;
    Vector ascent(m);
    double varphi = 0.0;
    constexpr int kMaxIters = 500;
    for (int it = 0; it < kMaxIters; ++it) {
        eval_point(extra, ascent, varphi);
        const Vector next = project_simplex(extra + step * ascent);
        const double omega_next = eval_point(next, ascent, varphi);
        sol.dual_iters = it + 1;
        if (omega_next > best_omega) {
            best_omega = omega_next;
            best_rho = next;
        }
        const double gap = varphi - omega_next;
        if (gap <= 1e-7 * (1.0 + std::abs(omega_next))) break;
        if (it > 0 && std::abs(omega_next - prev_omega) <= 1e-8 * (1.0 + std::abs(omega_next)) &&
            gap <= 1e-6 * (1.0 + std::abs(omega_next)))
            break;

        if (omega_next < prev_omega) {
            extra = next;
            t_accel = 1.0;
        } else {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
            extra = next + ((t_accel - 1.0) / t_next) * (next - rho);
            t_accel = t_next;
        }
        prev_omega = omega_next;
        rho = next;
    }

    rho = best_rho;
    Matrix combo = rho[0] * grads[0];
    for (int k = 1; k < m; ++k) combo.noalias() += rho[k] * grads[k];
    DualEval fin = eval_dual(theta, combo, ell, lambda, g_theta);
    sol.rho = rho;
    sol.phi_next = fin.phi;
    sol.omega = fin.omega;
    const Matrix delta = fin.phi - theta;
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k)
        worst = std::max(worst, (grads[k].array() * delta.array()).sum());
    sol.varphi = worst + lambda * l1_norm(fin.phi) - g_theta + 0.5 * ell * delta.squaredNorm();
    return sol;
}

double pareto_residual(const Matrix& theta, const std::vector<Matrix>& grads, double ell,
                       double lambda) {
    return solve_subproblem(theta, grads, ell, lambda).omega;
}

std::vector<Matrix> moo_gradients(const Matrix& theta, const models::ModelFamily& family,
                                  const LocalSolutions& local, Penalty penalty, double gamma) {
    const Vector errors = disparity_errors(theta, local, family);
    std::vector<Matrix> grads;
    grads.reserve(family.num_groups() + 1);
    grads.push_back(models::sym_part(family.grad(theta)));
    auto disp = disparity_grads_all(theta, errors, penalty, family);
    const bool has_frob = family.kind() != Model::GLasso && gamma > 0.0;
    for (auto& g : disp) {
        Matrix sg = models::sym_part(g);
        if (has_frob) sg.noalias() += 2.0 * gamma * theta;
        grads.push_back(std::move(sg));
    }
    return grads;
}

namespace {

struct SmoothEval {
    Vector f;            // f~_k with the gamma term folded in for k >= 1
    double delta_total;  // sum_k Delta_k (gamma and l1 excluded)
};

struct MooProblem {
    const models::ModelFamily& family;
    const LocalSolutions* local;  // nullptr on the M = 1 path
    Penalty penalty;
    double gamma;

    int num_objectives() const {
        return local ? family.num_groups() + 1 : 1;
    }

    SmoothEval smooth(const Matrix& theta) const {
        SmoothEval ev;
        if (!smooth_checked(theta, ev))
            throw NotPositiveDefinite("iterate left the positive definite cone");
        return ev;
    }

    // false when theta is infeasible for a PD-constrained model.
    bool smooth_checked(const Matrix& theta, SmoothEval& ev) const {
        ev.delta_total = 0.0;
        if (!local) {
            double f = 0.0;
            if (!family.loss_checked(theta, -1, f)) return false;
            ev.f = Vector::Constant(1, f);
            return true;
        }
        Vector losses;
        if (!family.all_losses_checked(theta, losses)) return false;
        const int K = family.num_groups();
        Vector errors(K);
        for (int k = 0; k < K; ++k) errors[k] = losses[k + 1] - local->raw_loss[k];
        const bool has_frob = family.kind() != Model::GLasso && gamma > 0.0;
        const double frob = has_frob ? gamma * theta.squaredNorm() : 0.0;
        ev.f = Vector(K + 1);
        ev.f[0] = losses[0];
        for (int k = 0; k < K; ++k) {
            const double dk = pairwise_disparity_from_errors(errors, k, penalty);
            ev.delta_total += dk;
            ev.f[k + 1] = dk + frob;
        }
        return true;
    }

    std::vector<Matrix> gradients(const Matrix& theta) const {
        if (!local) return {models::sym_part(family.grad(theta))};
        return moo_gradients(theta, family, *local, penalty, gamma);
    }
};

// The outer proximal-gradient loop of the fair estimator. With m1_stop the
// loop runs a single objective and adopts the composite-gradient-map stopping
// rule, matching fit_single step for step.
FairFit run_moo(const MooProblem& prob, Matrix theta, const FitConfig& cfg, bool m1_stop) {
    const bool needs_pd = prob.family.requires_pd();
    if (needs_pd && !models::is_symmetric_pd(theta))
        throw NotPositiveDefinite("initializer is not positive definite");

    FairFit fit;
    GraphEstimate& est = fit.estimate;
    est.model = prob.family.kind();
    if (cfg.record_iterates) est.iterates.push_back(theta);

    SmoothEval ev = prob.smooth(theta);
    const int m = prob.num_objectives();
    {
        TraceRow row;
        row.objectives = ev.f.array() + cfg.lambda * theta.cwiseAbs().sum();
        row.delta_total = ev.delta_total;
        row.rho = Vector::Constant(m, 1.0 / m);
        est.trace.push_back(row);
    }

    double ell_accepted = cfg.ell0;
    Vector rho_warm;
    for (long t = 0; t < cfg.max_iter; ++t) {
        const std::vector<Matrix> grads = prob.gradients(theta);
        double ell = std::max(cfg.ell0, ell_accepted * cfg.ell_shrink);
        SubproblemSolution sub = solve_subproblem(theta, grads, ell, cfg.lambda, rho_warm);
        rho_warm = sub.rho;

        if (!m1_stop && std::abs(sub.omega) <= cfg.eps) {
            est.converged = true;
            fit.final_residual = sub.omega;
            fit.final_ell = ell;
            fit.final_rho = sub.rho;
            break;
        }

        Matrix cand, delta;
        SmoothEval ev_cand;
        bool at_floor = false;
        for (;;) {
            cand = sub.phi_next;
            const bool feasible = prob.smooth_checked(cand, ev_cand);
            bool ok = feasible;
            if (ok) {
                delta = cand - theta;
                for (int k = 0; k < m && ok; ++k)
                    ok = detail::descent_ok(ev_cand.f[k], ev.f[k], grads[k], delta, ell);
            }
            if (ok) break;
            ell *= cfg.ell_growth;
            if (ell > detail::kEllCeiling) {
                if (!feasible)
                    throw NumericalError(
                        "candidate stays infeasible past the prox-parameter ceiling at "
                        "iteration " +
                        std::to_string(t));
                at_floor = true;  // descent failures at this scale are round-off
                break;
            }
            sub = solve_subproblem(theta, grads, ell, cfg.lambda, sub.rho);
            rho_warm = sub.rho;
        }
        if (at_floor) break;
        ell_accepted = ell;

        const double theta_norm = theta.norm();
        theta = cand;
        ev = ev_cand;
        est.iterations = t + 1;
        if (cfg.record_iterates) est.iterates.push_back(theta);

        TraceRow row;
        row.iter = t + 1;
        row.objectives = ev.f.array() + cfg.lambda * theta.cwiseAbs().sum();
        row.delta_total = ev.delta_total;
        row.rho = sub.rho;
        row.ell = ell;
        row.residual = sub.omega;
        row.step_norm = delta.norm();
        row.stat = m1_stop ? ell * delta.cwiseAbs().sum() : std::abs(sub.omega);
        est.trace.push_back(row);
        fit.final_rho = sub.rho;

        if (m1_stop) {
            if (row.stat <= cfg.eps) {
                est.converged = true;
                break;
            }
        } else if (row.step_norm <= cfg.eps * (1.0 + theta_norm)) {
            est.converged = true;
            break;
        }
    }

    est.matrix = theta;
    est.is_pd = needs_pd ? models::is_symmetric_pd(theta) : false;
    if (fit.final_ell == 0.0) {
        // Not stopped by the residual rule: certify stationarity at the exit
        // iterate the same way the in-loop check would have.
        const std::vector<Matrix> grads = prob.gradients(theta);
        const double ell = std::max(cfg.ell0, ell_accepted * cfg.ell_shrink);
        SubproblemSolution sub = solve_subproblem(theta, grads, ell, cfg.lambda, rho_warm);
        fit.final_residual = sub.omega;
        fit.final_ell = ell;
        fit.final_rho = sub.rho;
    }
    return fit;
}

}  // namespace

FairFit fit_moo_single(Model model, const GroupedDataset& ds, const FitConfig& cfg) {
    cfg.validate();
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    const MooProblem prob{family, nullptr, cfg.penalty, 0.0};
    return run_moo(prob, family.default_init(), cfg, /*m1_stop=*/true);
}

FairFit fit_fair(Model model, const GroupedDataset& ds, const FitConfig& cfg) {
    cfg.validate();
    if (ds.num_groups < 2) {
        FairFit fit;
        fit.estimate = fit_single(model, ds, cfg);
        return fit;
    }
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    return fit_fair(model, ds, cfg, fit_locals(family, cfg));
}

FairFit fit_fair(Model model, const GroupedDataset& ds, const FitConfig& cfg,
                 LocalSolutions local) {
    cfg.validate();
    if (ds.num_groups < 2) {
        FairFit fit;
        fit.estimate = fit_single(model, ds, cfg);
        return fit;
    }
    const GroupStats st = group_stats(ds);
    const models::ModelFamily family(model, ds, st, cfg.tau);
    const int K = ds.num_groups;

    // Initialize at the local graph whose group carries the largest pairwise
    // disparity among the local solutions; ties go to the lowest index.
    int k_init = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        const double dk = pairwise_disparity(local.theta[k], k, cfg.penalty, local, family);
        if (dk > worst) {
            worst = dk;
            k_init = k;
        }
    }
    Matrix theta0 = local.theta[k_init];

    double gamma = 0.0;
    if (model != Model::GLasso) {
        if (cfg.gamma_auto) {
            if (model == Model::CovGraph) {
                gamma = choose_gamma(family, local, {}, cfg.penalty);
            } else {
                std::vector<Matrix> probes;
                probes.push_back(theta0);
                for (const auto& th : local.theta) probes.push_back(th);
                gamma = choose_gamma(family, local, probes, cfg.penalty);
            }
        } else {
            gamma = cfg.gamma;
        }
    }

    const MooProblem prob{family, &local, cfg.penalty, gamma};
    FairFit fit = run_moo(prob, std::move(theta0), cfg, /*m1_stop=*/false);
    fit.locals = std::move(local);
    fit.gamma_used = gamma;
    fit.disparity = disparity_report(fit.estimate.matrix, fit.locals, cfg.penalty, family);
    return fit;
}

}  // namespace fairgm
