#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace arlkit {

using Matrix = Eigen::MatrixXd;

/**
 * Coefficients c_0..c_{k-1} of a moving sum Y_m = sum_t c_t X_{m-t}.
 *
 * c_t multiplies the sample t steps in the past. Weights are stored exactly as
 * supplied; every probability computation downstream only sees the
 * standardized threshold and the lag correlations, so the overall scale of the
 * weights never matters.
 */
class WeightVector {
public:
    /// Throws InvalidSpanError if fewer than two coefficients or all are zero.
    explicit WeightVector(std::vector<double> coeffs);
    WeightVector(std::initializer_list<double> coeffs) : WeightVector(std::vector<double>(coeffs)) {}

    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](std::size_t t) const { return coeffs_[t]; }

    /// Span k.
    std::size_t size() const noexcept { return coeffs_.size(); }

    double sum() const noexcept;
    double sum_sq() const noexcept;
    bool all_nonnegative() const noexcept;

    /// Multiplies every coefficient by alpha (alpha != 0).
    WeightVector scaled(double alpha) const;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> coeffs_;
};

/// k ones. The 1/k scale of a textbook moving average is irrelevant after
/// standardization, and unit weights keep lag correlations exactly rational.
WeightVector make_ma_weights(std::size_t k);

/// Filtered derivative: older half minus newer half, i.e. c_0..c_{k/2-1} = -1
/// and c_{k/2}..c_{k-1} = +1. Requires even k >= 2.
WeightVector make_fd_weights(std::size_t k);

enum class NoiseFamily { gaussian, uniform, laplace };

/// I.i.d. observation noise. Analytical routines assume the gaussian family;
/// the family only affects simulation.
struct NoiseModel {
    double mean = 0.0;
    double stddev = 1.0;
    NoiseFamily family = NoiseFamily::gaussian;

    /// Throws InvalidArgument unless stddev > 0 and both fields are finite.
    void validate() const;
};

struct StandardizedThreshold {
    double delta = 0.0;
};

struct RawThreshold {
    double h = 0.0;
    NoiseModel noise;
};

using Threshold = std::variant<StandardizedThreshold, RawThreshold>;

/// Weights plus a threshold; fully determines the in-control ARL.
class MosumSpec {
public:
    MosumSpec(WeightVector weights, Threshold threshold);
    MosumSpec(WeightVector weights, double delta) : MosumSpec(std::move(weights), StandardizedThreshold{delta}) {}

    const WeightVector& weights() const noexcept { return weights_; }
    const Threshold& threshold() const noexcept { return threshold_; }
    std::size_t span() const noexcept { return weights_.size(); }

private:
    WeightVector weights_;
    Threshold threshold_;
};

/// delta = (h - mu * sum c) / (sigma * sqrt(sum c^2)), or delta itself for a
/// standardized threshold.
double standardized_threshold(const MosumSpec& spec);

/// rho_j = sum_{t=0}^{k-1-j} c_t c_{t+j} / sum_t c_t^2, and 0 for j >= k.
double lag_correlation(const WeightVector& w, std::size_t j);

/// Lag correlations rho_0..rho_{k-1} of the statistic sequence; rho_0 = 1.
class CorrelationStructure {
public:
    explicit CorrelationStructure(const WeightVector& w);

    std::size_t span() const noexcept { return lags_.size(); }
    std::span<const double> lags() const noexcept { return lags_; }
    /// Zero beyond the span.
    double lag(std::size_t j) const noexcept { return j < lags_.size() ? lags_[j] : 0.0; }

    /// n x n banded Toeplitz matrix with entry (i, j) = lag(|i - j|).
    Matrix matrix(std::size_t n) const;

private:
    std::vector<double> lags_;
};

/// Throws InvalidDimensionError for n < 1.
Matrix correlation_matrix(const WeightVector& w, std::size_t n);

}  // namespace arlkit
