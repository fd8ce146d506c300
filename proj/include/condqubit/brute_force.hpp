#pragma once

#include <cstdint>
#include <optional>

#include "condqubit/entropy.hpp"
#include "condqubit/random.hpp"

namespace condqubit {

struct BruteForceConfig {
    int restarts = 32;        // random starts, in addition to the warm starts
    int grid_density = 16;    // Haar candidates screened per restart; the best seeds the simplex
    std::uint64_t seed = 0;
    int threads = 1;
    bool full_space = false;  // search bases of the whole qudit instead of the support of rho_A
    double ftol = 1e-10;
    double xtol = 1e-8;
    int max_evaluations = 0;  // per restart; 0 selects 4000 + 800 n for n parameters
    bool polish = true;       // Newton sweeps on each parameter after the simplex search
    std::optional<double> reference; // analytic value; sets diagnostics.certified
};

/// Minimum of the conditional entropy over projective measurements on the
/// local support of A. The search space is U = U0 * prod_{i<j} G_ij(theta, phi)
/// (d'^2 - d' parameters for support dimension d'). Restart 0 starts from the
/// computational basis of the support, restart 1 from the eigenbasis of
/// rho_A; the remaining restarts draw U0 from their own RNG stream. The
/// reduction keeps the lowest value, lowest restart index on ties, so the
/// result does not depend on `threads`.
MinimizationResult brute_force_min(const QuditQubitState& state, const EntropySpec& f,
                                   const BruteForceConfig& config = {});

/// Unitary from Givens parameters: (theta_ij, phi_ij) pairs in (i<j) order.
CMatrix givens_unitary(const RVector& params, int d);

/// Rank-1 POVM close to the basis `u`: the first dA rows of
/// diag(u, 1) * exp(i eps H) for a random Hermitian H on 2 dA dimensions.
RankOneMeasurement naimark_perturbation(const CMatrix& u, double eps, Rng& rng);

} // namespace condqubit
