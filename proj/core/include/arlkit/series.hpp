#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "arlkit/estimate.hpp"
#include "arlkit/model.hpp"
#include "arlkit/mvncdf.hpp"

namespace arlkit {

/**
 * Survival probabilities q_1..q_N of a MOSUM scheme, with q_0 = 1.
 *
 * q_n = P(first n tested statistics stay below the threshold),
 * p_n = q_{n-1} - q_n and r_n = q_n / q_{n-1}. p and r are derived from the
 * stored q's at construction, so the identities hold exactly as computed.
 * Indices are 1-based to match the usual notation; n = 0 is accepted by q().
 */
class SurvivalSeries {
public:
    /// q_errors and p_errors may be empty (treated as zero).
    SurvivalSeries(MosumSpec spec, std::vector<double> q, std::vector<double> q_errors = {},
                   std::vector<double> p_errors = {});

    const MosumSpec& spec() const noexcept { return spec_; }
    std::size_t span() const noexcept { return spec_.span(); }
    std::size_t size() const noexcept { return q_.size(); }

    double q(std::size_t n) const;
    double p(std::size_t n) const;
    double r(std::size_t n) const;
    double q_error(std::size_t n) const;
    double p_error(std::size_t n) const;

    /// r_1..r_N.
    std::span<const double> r_values() const noexcept { return r_; }
    std::span<const double> q_values() const noexcept { return q_; }

    std::uint64_t samples_used = 0;
    bool budget_exhausted = false;

private:
    void check_index(std::size_t n) const;

    MosumSpec spec_;
    std::vector<double> q_, q_err_, p_, p_err_, r_;
};

/// q_1..q_{n_max} from a single integration over the n_max-dimensional
/// correlation matrix of the tested statistics.
SurvivalSeries survival_sequence(const MosumSpec& spec, std::size_t n_max, const MvnAccuracy& acc = {});

/**
 * L_n = k + sum_{i<n} q_i + q_n / (1 - r_n).
 *
 * Uncertainty is first-order propagation of the integration errors, with the
 * tail written as q_{n-1}^2 / p_n - q_{n-1} so that the strongly correlated
 * pair (q_{n-1}, q_n) enters through p_n. Throws DegenerateGeometricError if
 * r_n >= 1 - 1e-9.
 */
ArlEstimate arl_approx(const SurvivalSeries& series, std::size_t n);

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// 1 + q_k/p_k <= L <= k + q_k/p_k for nonnegative weights. The ratio is
/// rounded to the grid of the upper bound so that upper - lower == k - 1
/// holds exactly in floating point.
Bounds lbh_bounds(const SurvivalSeries& series);
Bounds lbh_bounds(const MosumSpec& spec, const MvnAccuracy& acc = {});

/// |L_n - L| / L < 2 eps / (1 - r - eps)^2 once |r_i - r| < eps for all i >= n.
double error_bound_general(double r, double eps);

/// |L_n - L| < eps / (1 - r - eps)^2 when the tail of r_i is monotone.
double error_bound_monotone(double r, double eps);

struct Convergence {
    /// 1-based index m.
    std::size_t index = 0;
    double limit = 0.0;
};

/**
 * Smallest m with at least `window` terms after it such that every later
 * term stays within tol of r_m. The limit estimate is the mean of the last
 * `window` terms, which averages out a period-`window` zig-zag.
 */
std::optional<Convergence> detect_convergence(std::span<const double> r, double tol, std::size_t window);

struct SeriesConfig {
    double tol = 1e-3;
    /// 0 selects the span k.
    std::size_t window = 0;
    /// 0 selects max(ceil(k/2), 4).
    std::size_t n_cap = 0;
    MvnAccuracy accuracy;
};

std::size_t default_order_cap(std::size_t k) noexcept;

/**
 * Extends the survival sequence until detect_convergence fires or the order
 * cap is reached, and returns L_n at the stopping order.
 *
 * On convergence the uncertainty is the error bound evaluated at the
 * estimated limit with eps = tol (monotone form if the trailing window is
 * monotone). This is heuristic because the bound is stated for the true
 * limit. When the bound is unavailable (cap reached, or 1 - r - eps <= 0)
 * the propagated integration error is reported instead.
 */
ArlEstimate arl_estimate(const MosumSpec& spec, const SeriesConfig& cfg = {});

}  // namespace arlkit
