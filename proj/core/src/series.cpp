#include "arlkit/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "arlkit/errors.hpp"

namespace arlkit {

std::string_view to_string(ArlMethod m) noexcept {
    switch (m) {
        case ArlMethod::series: return "series";
        case ArlMethod::exact: return "exact";
        case ArlMethod::monte_carlo: return "monte-carlo";
        case ArlMethod::bound_lower: return "bound-lower";
        case ArlMethod::bound_upper: return "bound-upper";
    }
    return "unknown";
}

SurvivalSeries::SurvivalSeries(MosumSpec spec, std::vector<double> q, std::vector<double> q_errors,
                               std::vector<double> p_errors)
    : spec_(std::move(spec)), q_(std::move(q)), q_err_(std::move(q_errors)), p_err_(std::move(p_errors)) {
    const std::size_t n = q_.size();
    if (n < 1) throw InvalidDimensionError("survival series needs at least one term");
    if (q_err_.empty()) q_err_.assign(n, 0.0);
    if (q_err_.size() != n) throw InvalidArgument("q_errors length mismatch");
    if (p_err_.empty()) {
        p_err_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double prev = i == 0 ? 0.0 : q_err_[i - 1];
            p_err_[i] = std::hypot(prev, q_err_[i]);
        }
    }
    if (p_err_.size() != n) throw InvalidArgument("p_errors length mismatch");

    p_.resize(n);
    r_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(q_[i] >= 0.0 && q_[i] <= 1.0)) throw InvalidArgument("survival probabilities must lie in [0, 1]");
        const double prev = i == 0 ? 1.0 : q_[i - 1];
        p_[i] = prev - q_[i];
        r_[i] = prev > 0.0 ? q_[i] / prev : 0.0;
    }
}

void SurvivalSeries::check_index(std::size_t n) const {
    if (n < 1 || n > q_.size()) {
        throw InvalidArgument("series index " + std::to_string(n) + " outside 1.." + std::to_string(q_.size()));
    }
}

double SurvivalSeries::q(std::size_t n) const {
    if (n == 0) return 1.0;
    check_index(n);
    return q_[n - 1];
}

double SurvivalSeries::p(std::size_t n) const {
    check_index(n);
    return p_[n - 1];
}

double SurvivalSeries::r(std::size_t n) const {
    check_index(n);
    return r_[n - 1];
}

double SurvivalSeries::q_error(std::size_t n) const {
    if (n == 0) return 0.0;
    check_index(n);
    return q_err_[n - 1];
}

double SurvivalSeries::p_error(std::size_t n) const {
    check_index(n);
    return p_err_[n - 1];
}

SurvivalSeries survival_sequence(const MosumSpec& spec, std::size_t n_max, const MvnAccuracy& acc) {
    if (n_max < 1) throw InvalidDimensionError("survival sequence needs n_max >= 1");
    const double delta = standardized_threshold(spec);
    const Matrix R = correlation_matrix(spec.weights(), n_max);
    MvnPrefixResult res = mvn_stationary_survival(R, delta, acc);
    SurvivalSeries out(spec, std::move(res.probs), std::move(res.std_errors), std::move(res.drop_std_errors));
    out.samples_used = res.samples_used;
    out.budget_exhausted = res.budget_exhausted;
    return out;
}

ArlEstimate arl_approx(const SurvivalSeries& series, std::size_t n) {
    if (n < 1 || n > series.size()) {
        throw InvalidArgument("order " + std::to_string(n) + " outside 1.." + std::to_string(series.size()));
    }
    const double rn = series.r(n);
    if (rn >= 1.0 - 1e-9) {
        throw DegenerateGeometricError("r_" + std::to_string(n) + " = " + std::to_string(rn) +
                                       " leaves no geometric tail");
    }
    const double k = static_cast<double>(series.span());
    double head = 0.0;
    double var = 0.0;
    for (std::size_t i = 1; i < n; ++i) head += series.q(i);
    for (std::size_t i = 1; i + 1 < n; ++i) var += series.q_error(i) * series.q_error(i);

    const double qn = series.q(n);
    const double prev = series.q(n - 1);
    const double pn = series.p(n);

    // Tail q_n/(1 - r_n) = prev^2/p_n - prev; together with the head term for
    // q_{n-1}, dL/dq_{n-1} = 2 prev/p_n and dL/dp_n = -(prev/p_n)^2.
    const double d_prev = 2.0 * prev / pn;
    const double d_drop = (prev / pn) * (prev / pn);
    var += d_prev * d_prev * series.q_error(n - 1) * series.q_error(n - 1);
    var += d_drop * d_drop * series.p_error(n) * series.p_error(n);

    ArlEstimate est;
    est.value = k + head + qn / (1.0 - rn);
    est.method = ArlMethod::series;
    est.order = n;
    est.uncertainty = std::sqrt(var);
    return est;
}

Bounds lbh_bounds(const SurvivalSeries& series) {
    if (!series.spec().weights().all_nonnegative()) {
        throw NegativeWeightsError("LBH bounds require nonnegative weights");
    }
    const std::size_t k = series.span();
    if (series.size() < k) {
        throw InvalidArgument("LBH bounds need q_k; series has only " + std::to_string(series.size()) + " terms");
    }
    const double qk = series.q(k);
    const double pk = series.p(k);
    if (!(pk > 3.0 * series.p_error(k)) || !(pk > 0.0)) {
        throw UnstableDenominatorError("p_k = " + std::to_string(pk) + " is not resolved above 3 std errors (" +
                                       std::to_string(series.p_error(k)) + ")");
    }
    double ratio = qk / pk;
    const double kd = static_cast<double>(k);
    // Snap the ratio to the ulp grid of the upper bound so both sums are exact.
    const double quantum = std::ldexp(1.0, std::ilogb(kd + ratio) + 1 - 53);
    ratio = std::round(ratio / quantum) * quantum;

    Bounds b;
    b.lower = 1.0 + ratio;
    b.upper = kd + ratio;
    return b;
}

Bounds lbh_bounds(const MosumSpec& spec, const MvnAccuracy& acc) {
    if (!spec.weights().all_nonnegative()) throw NegativeWeightsError("LBH bounds require nonnegative weights");
    return lbh_bounds(survival_sequence(spec, spec.span(), acc));
}

namespace {

void check_bound_args(double r, double eps) {
    if (!(r >= 0.0 && r < 1.0)) throw PreconditionError("error bound needs 0 <= r < 1");
    if (!(eps > 0.0)) throw PreconditionError("error bound needs eps > 0");
    if (!(eps < 1.0 - r)) throw PreconditionError("error bound needs eps < 1 - r");
}

}  // namespace

double error_bound_general(double r, double eps) {
    check_bound_args(r, eps);
    const double gap = 1.0 - r - eps;
    return 2.0 * eps / (gap * gap);
}

double error_bound_monotone(double r, double eps) {
    check_bound_args(r, eps);
    const double gap = 1.0 - r - eps;
    return eps / (gap * gap);
}

std::optional<Convergence> detect_convergence(std::span<const double> r, double tol, std::size_t window) {
    if (window < 1) throw InvalidArgument("convergence window must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("convergence tolerance must be > 0");
    const std::size_t n = r.size();
    if (n <= window) return std::nullopt;
    for (std::size_t m = 0; m + window < n; ++m) {
        bool ok = true;
        for (std::size_t i = m + 1; i < n && ok; ++i) ok = std::abs(r[i] - r[m]) < tol;
        if (ok) {
            const auto tail = r.subspan(n - window);
            const double limit = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(window);
            return Convergence{m + 1, limit};
        }
    }
    return std::nullopt;
}

std::size_t default_order_cap(std::size_t k) noexcept { return std::max<std::size_t>((k + 1) / 2, 4); }

namespace {

bool is_monotone(std::span<const double> x) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] < x[i - 1]) up = false;
        if (x[i] > x[i - 1]) down = false;
    }
    return up || down;
}

}  // namespace

ArlEstimate arl_estimate(const MosumSpec& spec, const SeriesConfig& cfg) {
    const std::size_t k = spec.span();
    const std::size_t window = cfg.window == 0 ? k : cfg.window;
    const std::size_t cap = cfg.n_cap == 0 ? default_order_cap(k) : cfg.n_cap;

    // One integration over the cap dimension yields every shorter prefix, so
    // "extend until convergence" is a scan over prefixes of r.
    const SurvivalSeries series = survival_sequence(spec, cap, cfg.accuracy);
    const auto r = series.r_values();

    for (std::size_t n = window + 1; n <= cap; ++n) {
        const auto conv = detect_convergence(r.first(n), cfg.tol, window);
        if (!conv) continue;
        ArlEstimate est = arl_approx(series, n);
        const double rhat = conv->limit;
        if (rhat >= 0.0 && cfg.tol < 1.0 - rhat) {
            const auto trailing = r.subspan(conv->index - 1, n - conv->index + 1);
            est.uncertainty = is_monotone(trailing) ? error_bound_monotone(rhat, cfg.tol)
                                                    : est.value * error_bound_general(rhat, cfg.tol);
        }
        return est;
    }
    ArlEstimate est = arl_approx(series, cap);
    est.capped = true;
    return est;
}

}  // namespace arlkit
