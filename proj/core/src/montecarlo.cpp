#include "arlkit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "arlkit/errors.hpp"
#include "arlkit/normal.hpp"

namespace arlkit {

namespace {

// Unit-variance, zero-mean samplers for each noise family.
class UnitNoise {
public:
    explicit UnitNoise(NoiseFamily family) : family_(family) {}

    double operator()(Xoshiro256pp& rng) {
        switch (family_) {
            case NoiseFamily::gaussian: return gaussian(rng);
            case NoiseFamily::uniform: return kSqrt3 * (2.0 * rng.uniform_open() - 1.0);
            case NoiseFamily::laplace: {
                const double u = rng.uniform_open() - 0.5;
                const double mag = -std::log1p(-2.0 * std::abs(u)) * kInvSqrt2;
                return u < 0.0 ? -mag : mag;
            }
        }
        return 0.0;
    }

private:
    static constexpr double kSqrt3 = 1.7320508075688772935;
    static constexpr double kInvSqrt2 = 0.70710678118654752440;

    // Marsaglia polar method; caches the second variate.
    double gaussian(Xoshiro256pp& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng.uniform() - 1.0;
            v = 2.0 * rng.uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    NoiseFamily family_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Y_m written as sum over maximal runs of equal coefficients of
// c_run * (block sum of the samples at those lags).
struct Segment {
    std::size_t first_lag;
    std::size_t end_lag;  // exclusive
    double coeff;
};

std::vector<Segment> segments_of(const WeightVector& w) {
    std::vector<Segment> segs;
    for (std::size_t t = 0; t < w.size();) {
        std::size_t u = t + 1;
        while (u < w.size() && w[u] == w[t]) ++u;
        if (w[t] != 0.0) segs.push_back({t, u, w[t]});
        t = u;
    }
    return segs;
}

class Detector {
public:
    explicit Detector(const MosumSpec& spec)
        : k_(spec.span()), segs_(segments_of(spec.weights())), sums_(segs_.size(), 0.0), buf_(k_ + 1, 0.0) {
        // On unit noise the alarm Y >= h becomes sum c_t Z_t >= delta * ||c||.
        h_ = standardized_threshold(spec) * std::sqrt(spec.weights().sum_sq());
    }

    std::uint64_t run(Xoshiro256pp& rng, UnitNoise& noise, std::uint64_t max_steps, bool& truncated) {
        truncated = false;
        std::fill(sums_.begin(), sums_.end(), 0.0);
        // buf_ holds the last k+1 samples; sample m lives at slot m % (k+1).
        const std::size_t cap = k_ + 1;
        std::uint64_t m = 0;
        for (; m < k_; ++m) buf_[m % cap] = noise(rng);
        std::size_t since_refresh = 0;
        refresh(m - 1);
        for (;;) {
            // Statistic at sample index m (1-based) = k_ + steps taken.
            if (statistic() >= h_) return m;
            if (m >= max_steps) {
                truncated = true;
                return m;
            }
            const double x = noise(rng);
            buf_[m % cap] = x;
            if (++since_refresh == kRefreshEvery) {
                refresh(m);
                since_refresh = 0;
            } else {
                for (std::size_t s = 0; s < segs_.size(); ++s) {
                    const auto& seg = segs_[s];
                    // Entering lag first_lag, leaving lag end_lag.
                    sums_[s] += buf_[(m - seg.first_lag) % cap] - buf_[(m - seg.end_lag) % cap];
                }
            }
            ++m;
        }
    }

private:
    static constexpr std::size_t kRefreshEvery = 4096;

    double statistic() const {
        double y = 0.0;
        for (std::size_t s = 0; s < segs_.size(); ++s) y += segs_[s].coeff * sums_[s];
        return y;
    }

    // Recompute block sums with `newest` as the 0-based index of the latest sample.
    void refresh(std::uint64_t newest) {
        const std::size_t cap = k_ + 1;
        for (std::size_t s = 0; s < segs_.size(); ++s) {
            double acc = 0.0;
            for (std::size_t t = segs_[s].first_lag; t < segs_[s].end_lag; ++t) acc += buf_[(newest - t) % cap];
            sums_[s] = acc;
        }
    }

    std::size_t k_;
    std::vector<Segment> segs_;
    std::vector<double> sums_;
    std::vector<double> buf_;
    double h_ = 0.0;
};

}  // namespace

std::uint64_t simulate_run_length(const MosumSpec& spec, const NoiseModel& noise, Xoshiro256pp& stream,
                                  std::uint64_t max_steps) {
    noise.validate();
    Detector det(spec);
    UnitNoise sampler(noise.family);
    bool truncated = false;
    const std::uint64_t rl = det.run(stream, sampler, max_steps, truncated);
    if (truncated) throw TruncatedRunError(1, max_steps);
    return rl;
}

McSummary simulate_arl(const MosumSpec& spec, const McConfig& cfg) {
    if (cfg.replications < 1) throw InvalidArgument("replications must be >= 1");
    cfg.noise.validate();
    if (cfg.max_steps < spec.span()) throw InvalidArgument("max_steps must be at least the span");

    std::vector<std::uint64_t> lengths(cfg.replications);
    std::vector<unsigned char> truncated(cfg.replications, 0);

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.replications));

    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        Detector det(spec);
        for (std::uint64_t i = begin; i < end; ++i) {
            Xoshiro256pp rng(cfg.seed, i);
            UnitNoise sampler(cfg.noise.family);
            bool trunc = false;
            lengths[i] = det.run(rng, sampler, cfg.max_steps, trunc);
            truncated[i] = trunc ? 1 : 0;
        }
    };

    if (threads <= 1) {
        worker(0, cfg.replications);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (cfg.replications + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min<std::uint64_t>(cfg.replications, t * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(cfg.replications, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
    }

    const auto n_trunc = static_cast<std::uint64_t>(std::count(truncated.begin(), truncated.end(), 1));
    if (n_trunc > 0) throw TruncatedRunError(n_trunc, cfg.max_steps);

    // Welford, in replication order.
    double mean = 0.0, m2 = 0.0;
    std::uint64_t count = 0;
    for (const std::uint64_t len : lengths) {
        ++count;
        const double x = static_cast<double>(len);
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;

    McSummary out;
    out.mean = mean;
    out.stddev = std::sqrt(var);
    out.replications = count;
    out.min_run_length = *std::min_element(lengths.begin(), lengths.end());
    out.max_run_length = *std::max_element(lengths.begin(), lengths.end());
    out.estimate.value = mean;
    out.estimate.method = ArlMethod::monte_carlo;
    out.estimate.uncertainty = cfg.ci_z * out.stddev / std::sqrt(static_cast<double>(count));
    return out;
}

ArlEstimate estimate_arl(const MosumSpec& spec, const McConfig& cfg) { return simulate_arl(spec, cfg).estimate; }

}  // namespace arlkit
