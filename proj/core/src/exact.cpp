#include "arlkit/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "arlkit/errors.hpp"

namespace arlkit::exact {

namespace {

constexpr double kTruncation = 1e-15;

void require_positive(std::size_t n) {
    if (n < 1) throw InvalidArgument("survival index must be >= 1, got " + std::to_string(n));
}

}  // namespace

BigInt factorial(std::size_t n) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<BigInt> zigzag_numbers(std::size_t m_max) {
    // Entringer triangle: E(0,0) = 1, E(n,0) = 0, E(n,j) = E(n,j-1) + E(n-1,n-j).
    // The row end E(n,n) is the zigzag number E_n.
    std::vector<BigInt> out{BigInt(1)};
    std::vector<BigInt> prev{BigInt(1)};
    for (std::size_t n = 1; n <= m_max; ++n) {
        std::vector<BigInt> row(n + 1);
        row[0] = 0;
        for (std::size_t j = 1; j <= n; ++j) row[j] = row[j - 1] + prev[n - j];
        out.push_back(row[n]);
        prev = std::move(row);
    }
    return out;
}

BigInt zigzag_number(std::size_t m) { return zigzag_numbers(m).back(); }

Rational ordered_survival_q(std::size_t n) {
    require_positive(n);
    return Rational(BigInt(1), factorial(n + 1));
}

Rational zigzag_survival_q(std::size_t n) {
    require_positive(n);
    return Rational(zigzag_number(n + 1), factorial(n + 1));
}

Rational arl_ordered_partial(std::size_t n) {
    Rational sum = 2;
    BigInt fact = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        fact *= (i + 1);
        sum += Rational(BigInt(1), fact);
    }
    return sum;
}

Rational arl_zigzag_partial(std::size_t n) {
    const auto e = zigzag_numbers(n + 1);
    Rational sum = 2;
    BigInt fact = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        fact *= (i + 1);
        sum += Rational(e[i + 1], fact);
    }
    return sum;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

double arl_ordered() {
    Rational sum = 2;
    BigInt fact = 2;
    for (std::size_t n = 1;; ++n) {
        if (n > 1) fact *= (n + 1);
        const Rational term(BigInt(1), fact);
        sum += term;
        if (to_double(term) < kTruncation) break;
    }
    return to_double(sum);
}

double arl_zigzag() {
    // Terms decay like 2 (2/pi)^{n+1}; extend the triangle in chunks.
    std::size_t m_max = 64;
    for (;;) {
        const auto e = zigzag_numbers(m_max);
        Rational sum = 2;
        BigInt fact = 1;
        for (std::size_t n = 1; n + 1 <= m_max; ++n) {
            fact *= (n + 1);
            const Rational term(e[n + 1], fact);
            sum += term;
            if (to_double(term) < kTruncation) return to_double(sum);
        }
        m_max *= 2;
    }
}

double zigzag_r_limit() { return 2.0 / std::numbers::pi; }

}  // namespace arlkit::exact
