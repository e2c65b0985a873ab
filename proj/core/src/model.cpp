#include "arlkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "arlkit/errors.hpp"

namespace arlkit {

WeightVector::WeightVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) {
        throw InvalidSpanError("moving sum needs span k >= 2, got " + std::to_string(coeffs_.size()));
    }
    if (!std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); })) {
        throw InvalidArgument("weights must be finite");
    }
    if (std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; })) {
        throw InvalidSpanError("at least one weight must be nonzero");
    }
}

double WeightVector::sum() const noexcept { return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0); }

double WeightVector::sum_sq() const noexcept {
    return std::inner_product(coeffs_.begin(), coeffs_.end(), coeffs_.begin(), 0.0);
}

bool WeightVector::all_nonnegative() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c >= 0.0; });
}

WeightVector WeightVector::scaled(double alpha) const {
    std::vector<double> out(coeffs_);
    for (auto& c : out) c *= alpha;
    return WeightVector(std::move(out));
}

WeightVector make_ma_weights(std::size_t k) {
    if (k < 2) throw InvalidSpanError("moving average needs k >= 2, got " + std::to_string(k));
    return WeightVector(std::vector<double>(k, 1.0));
}

WeightVector make_fd_weights(std::size_t k) {
    if (k < 2 || k % 2 != 0) {
        throw InvalidSpanError("filtered derivative needs an even k >= 2, got " + std::to_string(k));
    }
    std::vector<double> c(k, 1.0);
    std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k / 2), -1.0);
    return WeightVector(std::move(c));
}

void NoiseModel::validate() const {
    if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0)) {
        throw InvalidArgument("noise model needs finite mean and stddev > 0");
    }
}

MosumSpec::MosumSpec(WeightVector weights, Threshold threshold)
    : weights_(std::move(weights)), threshold_(std::move(threshold)) {
    if (const auto* s = std::get_if<StandardizedThreshold>(&threshold_)) {
        if (std::isnan(s->delta)) throw InvalidArgument("delta must not be NaN");
    } else {
        const auto& raw = std::get<RawThreshold>(threshold_);
        raw.noise.validate();
        if (!std::isfinite(raw.h)) throw InvalidArgument("raw threshold h must be finite");
    }
}

double standardized_threshold(const MosumSpec& spec) {
    if (const auto* s = std::get_if<StandardizedThreshold>(&spec.threshold())) return s->delta;
    const auto& raw = std::get<RawThreshold>(spec.threshold());
    const auto& w = spec.weights();
    return (raw.h - raw.noise.mean * w.sum()) / (raw.noise.stddev * std::sqrt(w.sum_sq()));
}

double lag_correlation(const WeightVector& w, std::size_t j) {
    const std::size_t k = w.size();
    if (j >= k) return 0.0;
    if (j == 0) return 1.0;
    double acc = 0.0;
    for (std::size_t t = 0; t + j < k; ++t) acc += w[t] * w[t + j];
    return acc / w.sum_sq();
}

CorrelationStructure::CorrelationStructure(const WeightVector& w) : lags_(w.size()) {
    for (std::size_t j = 0; j < lags_.size(); ++j) lags_[j] = lag_correlation(w, j);
}

Matrix CorrelationStructure::matrix(std::size_t n) const {
    if (n < 1) throw InvalidDimensionError("correlation matrix needs n >= 1");
    const auto dim = static_cast<Eigen::Index>(n);
    Matrix R = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            R(i, j) = lag(static_cast<std::size_t>(i > j ? i - j : j - i));
        }
    }
    return R;
}

Matrix correlation_matrix(const WeightVector& w, std::size_t n) { return CorrelationStructure(w).matrix(n); }

}  // namespace arlkit
