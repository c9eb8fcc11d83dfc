#pragma once

#include "fairgm/solver_ista.hpp"

namespace fairgm::detail {

inline constexpr double kEllCeiling = 1e12;

// Shared between the single- and multi-objective solvers so that the M = 1
// reduction reproduces ISTA iterate-for-iterate.
inline Matrix prox_step(const Matrix& theta, const Matrix& combined_grad, double ell,
                        double lambda) {
    return soft_threshold(theta - combined_grad / ell, lambda / ell);
}

// Descent-lemma test on a smooth part: f(cand) <= f(theta) + <g, d> + ell/2 ||d||^2.
// Exact comparison: any slack lets overshoot steps through when the optimistic
// ell-shrink probes a too-small ell near a solution, and the resulting cycle
// stalls convergence.
inline bool descent_ok(double f_cand, double f_theta, const Matrix& grad, const Matrix& delta,
                       double ell) {
    const double bound = f_theta + (grad.array() * delta.array()).sum() +
                         0.5 * ell * delta.squaredNorm();
    return f_cand <= bound;
}

}  // namespace fairgm::detail
