#pragma once

#include <cstddef>
#include <cstdint>

#include "arlkit/estimate.hpp"
#include "arlkit/model.hpp"
#include "arlkit/random.hpp"

namespace arlkit {

struct McConfig {
    std::uint64_t replications = 100'000;
    std::uint64_t seed = 0x5eed5eedULL;
    NoiseModel noise;
    std::uint64_t max_steps = 10'000'000;
    /// Normal quantile for the reported CI half-width (1.96 ~ 95%, 2.576 ~ 99%).
    double ci_z = 1.96;
    /// 0 uses std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct McSummary {
    ArlEstimate estimate;
    double mean = 0.0;
    double stddev = 0.0;
    std::uint64_t replications = 0;
    std::uint64_t min_run_length = 0;
    std::uint64_t max_run_length = 0;
};

/**
 * One in-control run of the detector on i.i.d. noise drawn from `noise`.
 *
 * The first statistic is formed at sample k; the result is the sample index
 * of the first statistic with Y >= h. Raw thresholds are first reduced to
 * their standardized form, so the simulation runs on unit noise. Each
 * maximal run of equal coefficients keeps its own block sum, updated in O(1)
 * per step. Throws TruncatedRunError after max_steps samples.
 */
std::uint64_t simulate_run_length(const MosumSpec& spec, const NoiseModel& noise, Xoshiro256pp& stream,
                                  std::uint64_t max_steps = 10'000'000);

/// Mean run length over cfg.replications independent runs. Replication i
/// uses stream (cfg.seed, i) and results are reduced in replication order,
/// so the estimate does not depend on the thread count. Throws
/// TruncatedRunError if any run is truncated.
McSummary simulate_arl(const MosumSpec& spec, const McConfig& cfg = {});

/// simulate_arl(...).estimate.
ArlEstimate estimate_arl(const MosumSpec& spec, const McConfig& cfg = {});

}  // namespace arlkit
