#pragma once

#include "fairgm/models.hpp"
#include "fairgm/rng.hpp"

#include <functional>
#include <random>

namespace fairgm::test {

inline Matrix random_matrix(long rows, long cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = unif(rng);
    return m;
}

inline Matrix random_symmetric(long p, Rng& rng, double scale = 1.0) {
    return scale * models::sym_part(random_matrix(p, p, rng));
}

inline Matrix random_spd(long p, Rng& rng) {
    const Matrix a = random_matrix(p, p, rng);
    return a * a.transpose() / static_cast<double>(p) + 0.3 * Matrix::Identity(p, p);
}

inline Matrix random_binary(long n, long p, Rng& rng, double prob_one = 0.5) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix m(n, p);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < p; ++j) m(i, j) = unif(rng) < prob_one ? 1.0 : 0.0;
    return m;
}

// Central finite differences of f over the symmetric parameterization: the
// diagonal entry (j,j) is perturbed alone, the pair (i,j)/(j,i) jointly.
// Comparable against sym_param_gradient of an analytic (raw) gradient.
inline Matrix fd_sym_gradient(const std::function<double(const Matrix&)>& f, const Matrix& at,
                              double h = 1e-5) {
    const long p = at.rows();
    Matrix out(p, p);
    for (long j = 0; j < p; ++j) {
        for (long i = j; i < p; ++i) {
            Matrix dir = Matrix::Zero(p, p);
            dir(i, j) = 1.0;
            dir(j, i) = 1.0;  // overwrites on the diagonal
            const double fp = f(at + h * dir);
            const double fm = f(at - h * dir);
            out(i, j) = out(j, i) = (fp - fm) / (2.0 * h);
        }
    }
    return out;
}

// Derivative of f with respect to the tied parameters: G_jj on the diagonal,
// G_ij + G_ji off it.
inline Matrix sym_param_gradient(const Matrix& g) {
    Matrix out = g + g.transpose();
    out.diagonal() = g.diagonal();
    return out;
}

inline double rel_error(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

inline GroupedDataset make_dataset(const Matrix& data, const std::vector<long>& labels,
                                   bool binary = false) {
    return validate_dataset(data, labels, binary);
}

}  // namespace fairgm::test
