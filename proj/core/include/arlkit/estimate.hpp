#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace arlkit {

enum class ArlMethod { series, exact, monte_carlo, bound_lower, bound_upper };

std::string_view to_string(ArlMethod m) noexcept;

/// An ARL value tagged with how it was obtained.
struct ArlEstimate {
    double value = 0.0;
    ArlMethod method = ArlMethod::series;
    /// Series order n for L_n.
    std::optional<std::size_t> order;
    /// Series: error-bound or propagated integration error. Monte Carlo:
    /// CI half-width. Exact: 0.
    double uncertainty = 0.0;
    /// Series estimator stopped at its order cap rather than by convergence.
    bool capped = false;
};

}  // namespace arlkit
