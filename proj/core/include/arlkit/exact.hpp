#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace arlkit::exact {

using BigInt = boost::multiprecision::cpp_int;
/// Always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(std::size_t n);

/// Zigzag (tangent-secant) number E_m: sec z + tan z = sum_m E_m z^m / m!.
/// Counts alternating permutations of m elements.
BigInt zigzag_number(std::size_t m);

/// E_0..E_{m_max} from one pass of the Seidel-Entringer triangle.
std::vector<BigInt> zigzag_numbers(std::size_t m_max);

/// q_n = 1/(n+1)! for weights [-1, 1] at delta = 0: the n+1 samples must be
/// in one particular order.
Rational ordered_survival_q(std::size_t n);

/// q_n = E_{n+1}/(n+1)! for weights [1, 1] at delta = 0.
Rational zigzag_survival_q(std::size_t n);

/// 2 + sum_{i=1}^{n} q_i for the two cases.
Rational arl_ordered_partial(std::size_t n);
Rational arl_zigzag_partial(std::size_t n);

/// e, summed until the next term is below 1e-15.
double arl_ordered();

/// sec(1) + tan(1), summed until the next term is below 1e-15.
double arl_zigzag();

/// Limit 2/pi of q_n / q_{n-1} in the zigzag case.
double zigzag_r_limit();

double to_double(const Rational& x);

}  // namespace arlkit::exact
