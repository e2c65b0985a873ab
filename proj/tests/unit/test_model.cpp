#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "arlkit/errors.hpp"
#include "arlkit/model.hpp"
#include "arlkit/mvncdf.hpp"
#include "oracles.hpp"

using namespace arlkit;
using Catch::Approx;

TEST_CASE("moving average weights", "[model]") {
    CHECK(make_ma_weights(2) == WeightVector{1, 1});
    CHECK(make_ma_weights(3) == WeightVector{1, 1, 1});
    CHECK_THROWS_AS(make_ma_weights(1), InvalidSpanError);
    CHECK_THROWS_AS(make_ma_weights(0), InvalidSpanError);
}

TEST_CASE("filtered derivative weights", "[model]") {
    CHECK(make_fd_weights(2) == WeightVector{-1, 1});
    CHECK(make_fd_weights(4) == WeightVector{-1, -1, 1, 1});
    CHECK_THROWS_AS(make_fd_weights(3), InvalidSpanError);
    CHECK_THROWS_AS(make_fd_weights(0), InvalidSpanError);
}

TEST_CASE("weight vector invariants", "[model]") {
    CHECK_THROWS_AS(WeightVector({1.0}), InvalidSpanError);
    CHECK_THROWS_AS(WeightVector({0.0, 0.0, 0.0}), InvalidSpanError);
    CHECK_THROWS_AS(WeightVector({1.0, NAN}), InvalidArgument);
    const WeightVector w{1, -2, 3};
    CHECK(w.size() == 3);
    CHECK(w.sum() == 2.0);
    CHECK(w.sum_sq() == 14.0);
    CHECK_FALSE(w.all_nonnegative());
    CHECK(WeightVector({0, 1}).all_nonnegative());
}

TEST_CASE("standardized threshold", "[model]") {
    SECTION("h at the null mean gives zero") {
        const MosumSpec spec(make_ma_weights(3), RawThreshold{3 * 1.7, NoiseModel{1.7, 0.3}});
        CHECK(standardized_threshold(spec) == Approx(0.0).margin(1e-15));
    }
    SECTION("MA span 4, h = 4") {
        const MosumSpec spec(make_ma_weights(4), RawThreshold{4.0, NoiseModel{0.0, 1.0}});
        CHECK(standardized_threshold(spec) == 2.0);
    }
    SECTION("zero-sum weights ignore the mean") {
        const MosumSpec spec(WeightVector{-1, 1}, RawThreshold{0.0, NoiseModel{5.0, 2.0}});
        CHECK(standardized_threshold(spec) == 0.0);
    }
    SECTION("standardized form passes through") {
        CHECK(standardized_threshold(MosumSpec(make_ma_weights(2), 2.5)) == 2.5);
    }
    SECTION("invalid noise is rejected") {
        CHECK_THROWS_AS(MosumSpec(make_ma_weights(2), RawThreshold{0.0, NoiseModel{0.0, 0.0}}), InvalidArgument);
        CHECK_THROWS_AS(MosumSpec(make_ma_weights(2), RawThreshold{0.0, NoiseModel{0.0, -1.0}}), InvalidArgument);
    }
}

TEST_CASE("lag correlation examples", "[model]") {
    CHECK(lag_correlation(WeightVector{3, -1, 2}, 0) == 1.0);
    CHECK(lag_correlation(make_ma_weights(4), 1) == 0.75);
    CHECK(lag_correlation(WeightVector{-1, 1}, 1) == -0.5);
    CHECK(lag_correlation(make_ma_weights(4), 4) == 0.0);
    CHECK(lag_correlation(make_ma_weights(4), 100) == 0.0);
    // Small integer weights give exact rationals.
    CHECK(lag_correlation(make_fd_weights(4), 1) == 0.25);  // (1 - 1 + 1) / 4
    CHECK(lag_correlation(make_fd_weights(4), 2) == -0.5);  // (-1 - 1) / 4
    CHECK(lag_correlation(make_fd_weights(4), 3) == -0.25);
}

TEST_CASE("correlation matrix examples", "[model]") {
    CHECK(correlation_matrix(make_ma_weights(2), 1)(0, 0) == 1.0);

    const Matrix R = correlation_matrix(make_ma_weights(2), 3);
    Matrix expected(3, 3);
    expected << 1, 0.5, 0, 0.5, 1, 0.5, 0, 0.5, 1;
    CHECK(R == expected);

    const Matrix F = correlation_matrix(WeightVector{-1, 1}, 2);
    Matrix fe(2, 2);
    fe << 1, -0.5, -0.5, 1;
    CHECK(F == fe);

    CHECK_THROWS_AS(correlation_matrix(make_ma_weights(2), 0), InvalidDimensionError);
}

namespace {

WeightVector random_weights(std::mt19937_64& rng, bool integer) {
    std::uniform_int_distribution<std::size_t> span(2, 16);
    std::uniform_int_distribution<int> ints(-3, 3);
    std::normal_distribution<double> reals;
    std::vector<double> c(span(rng));
    for (;;) {
        for (auto& x : c) x = integer ? ints(rng) : reals(rng);
        if (std::any_of(c.begin(), c.end(), [](double x) { return x != 0.0; })) return WeightVector(c);
    }
}

}  // namespace

TEST_CASE("lag correlation matches explicit covariance bookkeeping", "[model][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightVector w = random_weights(rng, trial % 2 == 0);
        const std::vector<double> c(w.coeffs().begin(), w.coeffs().end());
        for (std::size_t j = 0; j <= w.size() + 1; ++j) {
            const double rho = lag_correlation(w, j);
            CHECK(rho == Approx(oracle::overlap_correlation(c, j)).margin(1e-14));
            CHECK(std::abs(rho) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("correlation matrix is scale invariant and banded", "[model][property]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> alpha(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightVector w = random_weights(rng, false);
        const std::size_t n = 1 + trial % 40;
        const Matrix R = correlation_matrix(w, n);
        const Matrix S = correlation_matrix(w.scaled(alpha(rng)), n);
        CHECK((R - S).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(R == correlation_matrix(w.scaled(2.0), n));
        CHECK(R.isApprox(R.transpose(), 0.0));
        for (Eigen::Index i = 0; i < R.rows(); ++i) {
            for (Eigen::Index j = 0; j < R.cols(); ++j) {
                if (static_cast<std::size_t>(std::abs(i - j)) >= w.size()) CHECK(R(i, j) == 0.0);
            }
        }
    }
}

TEST_CASE("correlation matrices factor for k <= 16, n <= 64", "[model][property]") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const WeightVector w = random_weights(rng, trial % 3 == 0);
        const std::size_t n = 1 + (trial * 7) % 64;
        const Matrix R = correlation_matrix(w, n);
        Matrix L;
        REQUIRE_NOTHROW(L = cholesky_psd(R));
        const Matrix target = R + 1e-12 * Matrix::Identity(R.rows(), R.cols());
        CHECK((L * L.transpose() - target).norm() / target.norm() <= 1e-10);
    }
    for (std::size_t k : {2u, 8u, 16u}) {
        REQUIRE_NOTHROW(cholesky_psd(correlation_matrix(make_ma_weights(k), 64)));
        REQUIRE_NOTHROW(cholesky_psd(correlation_matrix(make_fd_weights(k), 64)));
    }
}
