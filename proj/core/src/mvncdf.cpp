#include "arlkit/mvncdf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arlkit/errors.hpp"
#include "arlkit/normal.hpp"
#include "arlkit/random.hpp"

namespace arlkit {

Matrix cholesky_psd(const Matrix& R, double jitter) {
    if (R.rows() != R.cols()) throw InvalidDimensionError("cholesky_psd needs a square matrix");
    if (R.rows() < 1) throw InvalidDimensionError("cholesky_psd needs n >= 1");
    if (!(jitter >= 0.0)) throw InvalidArgument("jitter must be >= 0");
    constexpr double kPivotFloor = -1e-8;

    const Eigen::Index n = R.rows();
    Matrix L = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = R(j, j) + jitter;
        for (Eigen::Index t = 0; t < j; ++t) pivot -= L(j, t) * L(j, t);
        if (pivot < kPivotFloor) throw NotPsdError(static_cast<std::size_t>(j), pivot);
        if (pivot <= 0.0) continue;  // semidefinite direction: column stays zero
        const double d = std::sqrt(pivot);
        L(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = R(i, j);
            for (Eigen::Index t = 0; t < j; ++t) s -= L(i, t) * L(j, t);
            L(i, j) = s / d;
        }
    }
    return L;
}

namespace {

std::vector<double> richtmyer_generators(std::size_t dims) {
    std::vector<double> alpha;
    alpha.reserve(dims);
    for (unsigned candidate = 2; alpha.size() < dims; ++candidate) {
        bool prime = true;
        for (unsigned d = 2; d * d <= candidate; ++d) {
            if (candidate % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) {
            const double root = std::sqrt(static_cast<double>(candidate));
            alpha.push_back(root - std::floor(root));
        }
    }
    return alpha;
}

// Sequential-conditioning integrand for Z = L * Y with every coordinate
// bounded above by delta, except that with `first_exceeds` the first
// coordinate is bounded below by delta instead.
class OrthantIntegrand {
public:
    OrthantIntegrand(const Matrix& L, double delta, bool first_exceeds)
        : n_(static_cast<std::size_t>(L.rows())), delta_(delta), first_exceeds_(first_exceeds) {
        rows_.assign(n_ * n_, 0.0);
        first_nz_.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t first = i;
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                rows_[i * n_ + j] = v;
                if (v != 0.0 && first == i) first = j;
            }
            first_nz_[i] = first;
        }
        if (first_exceeds_) {
            e0_ = rows_[0] > 0.0 ? normal_sf(delta_ / rows_[0]) : (0.0 >= delta_ ? 1.0 : 0.0);
        } else {
            e0_ = below(0.0, rows_[0]);
        }
        y_.assign(n_, 0.0);
    }

    std::size_t dims() const noexcept { return n_; }
    double first_factor() const noexcept { return e0_; }

    // Writes the running products f_1..f_n for the point w in [0,1]^{n-1}.
    void evaluate(const double* w, double* f) {
        double e = e0_;
        double prod = e0_;
        f[0] = prod;
        for (std::size_t i = 1; i < n_; ++i) {
            if (prod == 0.0) {
                std::fill(f + i, f + n_, 0.0);
                return;
            }
            if (i == 1 && first_exceeds_) {
                // Uniform draw from the upper tail, mirrored for precision.
                y_[0] = -normal_quantile(std::clamp((1.0 - w[0]) * e, kTiny, kOneMinus));
            } else {
                y_[i - 1] = normal_quantile(std::clamp(w[i - 1] * e, kTiny, kOneMinus));
            }
            const double* row = &rows_[i * n_];
            double s = 0.0;
            for (std::size_t j = first_nz_[i]; j < i; ++j) s += row[j] * y_[j];
            e = below(s, row[i]);
            prod *= e;
            f[i] = prod;
        }
    }

private:
    static constexpr double kTiny = 1e-300;
    static constexpr double kOneMinus = 1.0 - 0x1.0p-53;

    double below(double shift, double diag) const {
        if (diag > 0.0) return normal_cdf((delta_ - shift) / diag);
        return shift < delta_ ? 1.0 : 0.0;
    }

    std::size_t n_;
    double delta_;
    bool first_exceeds_;
    double e0_ = 0.0;
    std::vector<double> rows_;
    std::vector<std::size_t> first_nz_;
    std::vector<double> y_;
};

struct Summary {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean and standard error of one statistic across replicates.
template <class F>
Summary summarize(std::size_t replicates, F&& value_of) {
    const double md = static_cast<double>(replicates);
    double mean = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) mean += value_of(r);
    mean /= md;
    double ss = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
        const double d = value_of(r) - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (md - 1.0) / md)};
}

void validate(const Matrix& R, double delta, const MvnAccuracy& acc) {
    if (R.rows() != R.cols() || R.rows() < 1) throw InvalidDimensionError("orthant probability needs n >= 1");
    if (std::isnan(delta)) throw InvalidArgument("delta must not be NaN");
    if (acc.replicates < 2) throw InvalidArgument("need at least two randomization replicates");
    if (acc.initial_points < 1) throw InvalidArgument("initial_points must be >= 1");
}

// Randomized lattice driver. After each stage `done(means, points)` sees the
// replicate means (replicate r, prefix i at means[r * n + i]) and returns
// true to stop. Returns false if the budget ran out first.
template <class Done>
bool run_lattice(OrthantIntegrand& integrand, const MvnAccuracy& acc, std::uint64_t& samples_used, Done&& done) {
    const std::size_t n = integrand.dims();
    const std::size_t dim = n - 1;
    const std::size_t m = acc.replicates;
    const std::vector<double> alpha = richtmyer_generators(dim);
    std::vector<double> shifts(m * dim);
    for (std::size_t r = 0; r < m; ++r) {
        Xoshiro256pp rng(acc.seed, r);
        for (std::size_t c = 0; c < dim; ++c) shifts[r * dim + c] = rng.uniform();
    }

    std::vector<double> sums(m * n, 0.0), means(m * n);
    std::vector<double> w(dim), w_anti(dim), f(n), f_anti(n);
    std::uint64_t done_points = 0;
    std::uint64_t target = acc.initial_points;
    for (;;) {
        for (std::size_t r = 0; r < m; ++r) {
            double* row_sums = &sums[r * n];
            const double* shift = &shifts[r * dim];
            for (std::uint64_t j = done_points + 1; j <= target; ++j) {
                const double jd = static_cast<double>(j);
                for (std::size_t c = 0; c < dim; ++c) {
                    double x = jd * alpha[c] + shift[c];
                    x -= std::floor(x);
                    w[c] = std::abs(2.0 * x - 1.0);
                    w_anti[c] = 1.0 - w[c];
                }
                integrand.evaluate(w.data(), f.data());
                integrand.evaluate(w_anti.data(), f_anti.data());
                for (std::size_t i = 0; i < n; ++i) row_sums[i] += 0.5 * (f[i] + f_anti[i]);
            }
        }
        done_points = target;
        samples_used = 2 * target * m;
        const double inv = 1.0 / static_cast<double>(target);
        for (std::size_t k = 0; k < m * n; ++k) means[k] = sums[k] * inv;
        if (done(means)) return true;

        std::uint64_t next = 2 * target;
        const std::uint64_t cap = acc.max_points / (2 * m);
        if (next > cap) next = cap;
        if (next <= target) return false;
        target = next;
    }
}

double drop_allowance(const MvnAccuracy& acc, double drop) {
    return acc.rel_drop_error * std::max(std::abs(drop), acc.abs_error);
}

}  // namespace

MvnResult mvn_orthant_below(const Matrix& R, double delta, const MvnAccuracy& acc) {
    validate(R, delta, acc);
    OrthantIntegrand integrand(cholesky_psd(R, acc.jitter), delta, false);
    const std::size_t n = integrand.dims();
    MvnResult out;
    if (n == 1) {
        out.prob = integrand.first_factor();
        return out;
    }
    const std::size_t m = acc.replicates;
    Summary last;
    const bool met = run_lattice(integrand, acc, out.samples_used, [&](const std::vector<double>& means) {
        last = summarize(m, [&](std::size_t r) { return means[r * n + n - 1]; });
        return last.std_error <= acc.abs_error;
    });
    out.prob = std::clamp(last.mean, 0.0, 1.0);
    out.std_error = last.std_error;
    out.budget_exhausted = !met;
    return out;
}

namespace {

// Fills `out` from replicate-level prefix values; prefix(r, i) is the value
// of probability i in replicate r, with prefix(r, -1) = 1.
template <class Prefix>
bool fill_prefix(std::size_t n, std::size_t m, const MvnAccuracy& acc, MvnPrefixResult& out, Prefix&& prefix) {
    bool met = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Summary q = summarize(m, [&](std::size_t r) { return prefix(r, i); });
        const Summary drop = summarize(m, [&](std::size_t r) {
            return (i == 0 ? 1.0 : prefix(r, i - 1)) - prefix(r, i);
        });
        out.probs[i] = std::clamp(q.mean, 0.0, 1.0);
        out.std_errors[i] = q.std_error;
        out.drop_std_errors[i] = drop.std_error;
        if (q.std_error > acc.abs_error) met = false;
        if (acc.rel_drop_error > 0.0 && drop.std_error > drop_allowance(acc, drop.mean)) met = false;
    }
    return met;
}

MvnPrefixResult empty_prefix(std::size_t n) {
    MvnPrefixResult out;
    out.probs.assign(n, 0.0);
    out.std_errors.assign(n, 0.0);
    out.drop_std_errors.assign(n, 0.0);
    return out;
}

}  // namespace

MvnPrefixResult mvn_orthant_prefix(const Matrix& R, double delta, const MvnAccuracy& acc) {
    validate(R, delta, acc);
    OrthantIntegrand integrand(cholesky_psd(R, acc.jitter), delta, false);
    const std::size_t n = integrand.dims();
    MvnPrefixResult out = empty_prefix(n);
    if (n == 1) {
        out.probs[0] = integrand.first_factor();
        return out;
    }
    const std::size_t m = acc.replicates;
    const bool met = run_lattice(integrand, acc, out.samples_used, [&](const std::vector<double>& means) {
        return fill_prefix(n, m, acc, out, [&](std::size_t r, std::size_t i) { return means[r * n + i]; });
    });
    out.budget_exhausted = !met;
    return out;
}

MvnPrefixResult mvn_stationary_survival(const Matrix& R, double delta, const MvnAccuracy& acc) {
    validate(R, delta, acc);
    const Eigen::Index dim = R.rows();
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (R(i, j) != R(0, i > j ? i - j : j - i)) {
                throw InvalidArgument("stationary survival needs a symmetric Toeplitz matrix");
            }
        }
    }
    OrthantIntegrand integrand(cholesky_psd(R, acc.jitter), delta, true);
    const std::size_t n = integrand.dims();
    MvnPrefixResult out = empty_prefix(n);
    const double p1 = integrand.first_factor();
    out.probs[0] = std::clamp(1.0 - p1, 0.0, 1.0);
    if (n == 1) return out;

    const std::size_t m = acc.replicates;
    std::vector<double> q(m * n);
    const bool met = run_lattice(integrand, acc, out.samples_used, [&](const std::vector<double>& means) {
        // means[r * n + i] estimates p_{i+1}; survival is one minus the running sum.
        for (std::size_t r = 0; r < m; ++r) {
            double s = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                s -= means[r * n + i];
                q[r * n + i] = s;
            }
        }
        return fill_prefix(n, m, acc, out, [&](std::size_t r, std::size_t i) { return q[r * n + i]; });
    });
    out.budget_exhausted = !met;
    return out;
}

}  // namespace arlkit
