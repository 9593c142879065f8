#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fourthmoment/core/errors.hpp"

namespace fourthmoment {

/// Central finite-difference estimate of the r-th derivative (r <= 4).
template <class F>
double central_difference(F&& f, double x, double h, int r) {
    switch (r) {
        case 0: return f(x);
        case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
        case 4: return (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (h * h * h * h);
        default: throw DomainError("central_difference supports r <= 4");
    }
}

/// max |f^{(r)}| over `samples` evenly spaced points of [lo, hi], estimated
/// with difference step h.
template <class F>
double max_abs_derivative(F&& f, double lo, double hi, int r, double h, std::size_t samples) {
    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        best = std::max(best, std::abs(central_difference(f, x, h, r)));
    }
    return best;
}

}  // namespace fourthmoment
