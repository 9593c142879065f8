#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fourthmoment/core/errors.hpp"

namespace fourthmoment {

/// Leading coefficient of the main term T P_4(log T) of the fourth moment.
inline constexpr double kP4Leading = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);

/// P_4(x) = a_0 + a_1 x + ... + a_4 x^4 with a_4 pinned to 1/(2 pi^2).
/// Only a_0..a_3 are free.
class MomentPolynomial {
   public:
    MomentPolynomial() = default;
    explicit MomentPolynomial(std::array<double, 4> lower) : a_{lower[0], lower[1], lower[2], lower[3], kP4Leading} {}

    /// Accepts five coefficients; a_4 must be the pinned leading value.
    static MomentPolynomial from_coefficients(const std::array<double, 5>& a) {
        if (std::abs(a[4] - kP4Leading) > 4e-16)
            throw DomainError("P4 leading coefficient must be 1/(2 pi^2), got " + std::to_string(a[4]));
        return MomentPolynomial({a[0], a[1], a[2], a[3]});
    }

    const std::array<double, 5>& coefficients() const noexcept { return a_; }
    double operator[](std::size_t j) const noexcept { return a_[j]; }

   private:
    std::array<double, 5> a_{0.0, 0.0, 0.0, 0.0, kP4Leading};
};

inline double p4_eval(const MomentPolynomial& poly, double x) {
    const auto& a = poly.coefficients();
    return (((a[4] * x + a[3]) * x + a[2]) * x + a[1]) * x + a[0];
}

inline double p4_derivative(const MomentPolynomial& poly, double x) {
    const auto& a = poly.coefficients();
    return ((4.0 * a[4] * x + 3.0 * a[3]) * x + 2.0 * a[2]) * x + a[1];
}

/// Q_4 = P_4 + P_4', the density of the main term: d/dT [T P_4(log T)] = Q_4(log T).
inline double q4_eval(const MomentPolynomial& poly, double x) { return p4_eval(poly, x) + p4_derivative(poly, x); }

}  // namespace fourthmoment
