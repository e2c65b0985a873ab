#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "arlkit/model.hpp"

namespace arlkit {

/// Accuracy and randomization settings for the orthant integrator.
struct MvnAccuracy {
    /// Target standard error of each probability.
    double abs_error = 2e-5;
    /// Target relative standard error of each first-failure probability
    /// p_i = q_{i-1} - q_i. Only consulted by mvn_orthant_prefix.
    double rel_drop_error = 1e-3;
    /// Total integrand evaluations allowed, across all replicates.
    std::uint64_t max_points = std::uint64_t{1} << 22;
    /// Lattice points per replicate in the first stage; doubled each stage.
    std::uint64_t initial_points = 256;
    /// Independent random shifts; the standard error comes from their spread.
    std::size_t replicates = 12;
    std::uint64_t seed = 0x5eed5eedULL;
    double jitter = 1e-12;
};

struct MvnResult {
    double prob = 0.0;
    double std_error = 0.0;
    std::uint64_t samples_used = 0;
    /// The accuracy target was not met within max_points.
    bool budget_exhausted = false;
};

/// Orthant probabilities of every leading sub-vector, estimated from one set
/// of integrand evaluations: probs[i] = P(Z_1 < d, ..., Z_{i+1} < d).
struct MvnPrefixResult {
    std::vector<double> probs;
    std::vector<double> std_errors;
    /// Standard error of probs[i-1] - probs[i] (with probs[-1] = 1), taken
    /// from the replicate spread of the difference itself.
    std::vector<double> drop_std_errors;
    std::uint64_t samples_used = 0;
    bool budget_exhausted = false;
};

/**
 * Lower Cholesky factor of R + jitter * I.
 *
 * Pivots in [-1e-8, 0] are treated as zero (the column is set to zero), which
 * admits positive semidefinite input. A pivot below -1e-8 raises NotPsdError.
 */
Matrix cholesky_psd(const Matrix& R, double jitter = 1e-12);

/**
 * P(Z_1 < delta, ..., Z_n < delta) for Z ~ N(0, R).
 *
 * Genz's sequential conditioning maps the orthant integral onto the unit
 * cube of dimension n - 1; that integral is estimated with a Richtmyer rank-1
 * lattice (square roots of primes) under baker's transform with antithetic
 * pairs, randomized by independent uniform shifts. Each stage doubles the
 * number of lattice points per replicate until the standard error reaches
 * acc.abs_error or acc.max_points is spent.
 *
 * Every limit is equal, so the usual limit-sorting step is skipped and the
 * coordinates are integrated in natural order. For n = 1 the result is
 * normal_cdf(delta) with zero error.
 */
MvnResult mvn_orthant_below(const Matrix& R, double delta, const MvnAccuracy& acc = {});

/// As mvn_orthant_below, but reports every leading orthant probability. Since
/// the Cholesky factor of a leading block is the leading block of the factor,
/// the running product of the conditional probabilities after i coordinates
/// is an unbiased estimate of the i-dimensional probability. Stops when every
/// prefix meets acc.abs_error and every drop meets acc.rel_drop_error.
MvnPrefixResult mvn_orthant_prefix(const Matrix& R, double delta, const MvnAccuracy& acc = {});

/**
 * Survival probabilities of a stationary sequence: probs[i] = q_{i+1} as in
 * mvn_orthant_prefix, for a symmetric Toeplitz R (InvalidArgument otherwise).
 *
 * Instead of differencing near-one orthant probabilities, each first-failure
 * probability p_i = P(Z_1 < d, ..., Z_{i-1} < d, Z_i >= d) is integrated
 * directly. Reversing the coordinates leaves a symmetric Toeplitz matrix
 * unchanged, so p_i = P(Z_1 >= d, Z_2 < d, ..., Z_i < d); with the
 * exceeding coordinate first, its tail factor is exact and every p_i is a
 * prefix of one integral. q_i = 1 - sum_{j<=i} p_j per replicate, so the
 * drop errors reflect the direct estimate of p_i. The relative accuracy of
 * small p_i is far better than with mvn_orthant_prefix at high thresholds.
 */
MvnPrefixResult mvn_stationary_survival(const Matrix& R, double delta, const MvnAccuracy& acc = {});

}  // namespace arlkit
