#pragma once

#include "fairgm/common.hpp"

#include <cstdint>
#include <vector>

namespace fairgm::synth {

/// Per-group true graphs plus the generator inputs that made them.
struct GroundTruth {
    std::vector<Matrix> graphs;  // Sigma_k (Gaussian) or Theta_k (Ising)
    int p = 0;
    int blocks_or_hubs = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> hubs;  // hub node ids (ascending), Ising generator only
};

/// K block-diagonal covariance matrices: Q blocks of size P/Q filled with
/// N(0.7, 0.2) draws (mean 0.7, sd 0.2), symmetrized, eigenvalues clamped at
/// 1e-5; each subsequent group resets `reset_per_group` not-yet-altered blocks
/// (consumed in ascending index order) to the identity.
GroundTruth gen_block_covariances(int p, int q, int k, std::uint64_t seed,
                                  int reset_per_group = 2);

/// N x P draws from N(0, sigma) via the Cholesky factor of sigma.
Matrix sample_mvn(const Matrix& sigma, long n, std::uint64_t seed);

/// Hub-based Ising networks: sparse Bernoulli(0.01) adjacency, H hub nodes
/// with Bernoulli(0.99) rows/columns, edge weights uniform on
/// +-[0.25, 0.75] (hub) or +-[0.25, 0.5] (non-hub), spectral shift so the
/// first network has minimum eigenvalue exactly 0.1; each subsequent network
/// removes two hub nodes' off-diagonal entries.
GroundTruth gen_hub_networks(int p, int h, int k, std::uint64_t seed);

/// Systematic-scan Gibbs sampler for the binary Ising model: within a sweep,
/// x_j ~ Bernoulli(sigmoid(theta_jj + sum_{j' != j} theta_{jj'} x_{j'})) for
/// j = 1..P. Collects n rows after `burn_in` sweeps at stride `thinning`.
Matrix gibbs_sample_ising(const Matrix& theta, long n, long burn_in = 10000,
                          long thinning = 100, std::uint64_t seed = 0);

/// Exact probabilities of all 2^P binary outcomes (P <= 12). Outcome index
/// encodes x_j in bit j.
Vector exact_ising_distribution(const Matrix& theta);

}  // namespace fairgm::synth
