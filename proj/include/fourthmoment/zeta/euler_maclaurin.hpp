#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "fourthmoment/core/errors.hpp"

namespace fourthmoment {

using Complex = std::complex<double>;

/// A value together with an absolute error bound.
struct ZetaEstimate {
    Complex value;
    double err = 0.0;
};

namespace detail {

// B_{2k} / (2k)!
inline double bernoulli_over_factorial(int k) {
    return boost::math::bernoulli_b2n<double>(k) / boost::math::unchecked_factorial<double>(static_cast<unsigned>(2 * k));
}

// Modulus of the first omitted Euler-Maclaurin term times the usual
// |s + 2m + 1| / (sigma + 2m + 1) factor.
inline double euler_maclaurin_tail_bound(Complex s, double n, int m) {
    Complex poch = s;
    for (int j = 1; j <= 2 * m; ++j) poch *= (s + static_cast<double>(j));
    const double term = std::abs(poch * bernoulli_over_factorial(m + 1)) * std::pow(n, -(s.real() + 2.0 * m + 1.0));
    const double sigma_shift = s.real() + 2.0 * m + 1.0;
    if (sigma_shift <= 0.0) return std::numeric_limits<double>::infinity();
    return term * std::abs(s + static_cast<double>(2 * m + 1)) / sigma_shift;
}

}  // namespace detail

/// zeta(s) by Euler-Maclaurin summation: the partial sum over n < n_terms,
/// the integral and half-endpoint terms at N = n_terms, and tail_order
/// Bernoulli corrections. err combines the remainder bound with a rounding
/// estimate for the partial sum.
inline ZetaEstimate euler_maclaurin_zeta_bounded(Complex s, int n_terms, int tail_order) {
    if (s == Complex(1.0, 0.0)) throw DomainError("zeta has a pole at s = 1");
    if (n_terms < 1 || tail_order < 1) throw DomainError("euler_maclaurin_zeta needs n_terms >= 1 and tail_order >= 1");
    if (tail_order > 60) throw DomainError("tail_order above 60 is not supported");
    const double N = static_cast<double>(n_terms);
    Complex sum = 0.0;
    double magnitude = 0.0;
    for (int n = n_terms - 1; n >= 1; --n) {
        const double ln = std::log(static_cast<double>(n));
        const Complex term = std::exp(-s * ln);
        sum += term;
        magnitude += std::abs(term) * (1.0 + std::abs(s) * ln);
    }
    const double lnN = std::log(N);
    const Complex n_pow = std::exp(-s * lnN);  // N^{-s}
    sum += N * n_pow / (s - 1.0);
    sum += 0.5 * n_pow;
    Complex poch = s;  // s (s+1) ... (s+2k-2)
    Complex n_pow_k = n_pow / N;  // N^{-s-2k+1}
    for (int k = 1; k <= tail_order; ++k) {
        sum += detail::bernoulli_over_factorial(k) * poch * n_pow_k;
        poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        n_pow_k /= N * N;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double err = detail::euler_maclaurin_tail_bound(s, N, tail_order) + 4.0 * eps * (magnitude + std::abs(sum) + 1.0);
    return {sum, err};
}

inline Complex euler_maclaurin_zeta(Complex s, int n_terms, int tail_order) {
    return euler_maclaurin_zeta_bounded(s, n_terms, tail_order).value;
}

/// Picks N and the tail order so the remainder bound falls below 1e-14.
inline ZetaEstimate euler_maclaurin_zeta(Complex s) {
    constexpr int order = 24;
    const double reach = std::abs(s) + 2.0 * order + 1.0;
    int n = static_cast<int>(std::ceil(1.25 * reach / (2.0 * std::numbers::pi))) + 8;
    while (detail::euler_maclaurin_tail_bound(s, n, order) > 1e-14 && n < (1 << 26)) n += n / 2 + 1;
    return euler_maclaurin_zeta_bounded(s, n, order);
}

}  // namespace fourthmoment
