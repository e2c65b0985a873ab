#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace arlkit {

// Two families: bad input (caller error) and numerical failure. The CLI maps
// the first to exit code 2 and the second to exit code 3.

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSpanError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidDimensionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Raised by bounds that only hold for nonnegative weights.
class NegativeWeightsError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class PreconditionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class NotPsdError : public NumericalError {
public:
    NotPsdError(std::size_t pivot_index, double pivot)
        : NumericalError("matrix is not positive semidefinite: pivot " + std::to_string(pivot_index) +
                         " = " + std::to_string(pivot)),
          pivot_index_(pivot_index),
          pivot_(pivot) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_index_;
    double pivot_;
};

/// r_n is too close to 1 for the geometric tail q_n / (1 - r_n) to be meaningful.
class DegenerateGeometricError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// p_k is not resolved above its own Monte Carlo noise.
class UnstableDenominatorError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncatedRunError : public NumericalError {
public:
    TruncatedRunError(std::uint64_t truncated_runs, std::uint64_t max_steps)
        : NumericalError(std::to_string(truncated_runs) + " run(s) reached max_steps = " +
                         std::to_string(max_steps) + " without an alarm"),
          truncated_runs_(truncated_runs),
          max_steps_(max_steps) {}

    std::uint64_t truncated_runs() const noexcept { return truncated_runs_; }
    std::uint64_t max_steps() const noexcept { return max_steps_; }

private:
    std::uint64_t truncated_runs_;
    std::uint64_t max_steps_;
};

}  // namespace arlkit
