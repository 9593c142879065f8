#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/parallel.hpp"
#include "fourthmoment/core/quadrature.hpp"
#include "fourthmoment/mellin/panel.hpp"

namespace fourthmoment {

/// Piecewise-constant function: value[i] on [breaks[i], breaks[i+1]).
struct PiecewiseConstant {
    std::vector<double> breaks;
    std::vector<double> values;

    double operator()(double x) const {
        if (x < breaks.front() || x > breaks.back()) return 0.0;
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - breaks.begin()), values.size()) - 1;
        return values[i];
    }
};

struct Lemma1Pair {
    double lhs = 0.0;  ///< int_0^T |int_a^b g(x) x^{-sigma-it} dx|^2 dt
    double rhs = 0.0;  ///< 2 pi int_a^b g(x)^2 x^{1-2 sigma} dx
};

inline constexpr double kLemma1MaxStep = 0.05;

/// Both sides of the mean-square inequality for a real g on [a, b] given by
/// its breakpoints (a, ..., b; g smooth between consecutive entries). The
/// outer t-integral is Simpson on a grid of step <= 0.05; inner transforms
/// are computed once per t-node, in parallel, and reduced in index order.
template <class G>
Lemma1Pair lemma1_pair(G&& g, const std::vector<double>& breaks, double sigma, double T, Parallelism par = {}) {
    if (breaks.size() < 2 || !(breaks.front() >= 2.0)) throw DomainError("lemma1_pair needs [a, b] inside [2, infinity)");
    if (!(T > 0.0)) throw DomainError("lemma1_pair requires T > 0");
    Lemma1Pair out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        out.rhs += gl_integrate(
            [&](double x) {
                const double v = g(x);
                return v * v * std::pow(x, 1.0 - 2.0 * sigma);
            },
            lo, hi, (hi - lo) / 16.0);
    }
    out.rhs *= 2.0 * std::numbers::pi;

    auto n = static_cast<std::size_t>(std::ceil(T / kLemma1MaxStep));
    if (n % 2) ++n;
    const double h = T / static_cast<double>(n);
    std::vector<double> power(n + 1);
    const PanelRule rule = PanelRule::smooth();
    parallel_for(n + 1, par, [&](std::size_t i) {
        const Complex s(sigma, h * static_cast<double>(i));
        power[i] = std::norm(mellin_integral(g, std::span<const double>(breaks), s, rule));
    });
    double acc = power.front() + power.back();
    for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * power[i];
    out.lhs = acc * h / 3.0;
    return out;
}

inline Lemma1Pair lemma1_pair(const PiecewiseConstant& g, double sigma, double T, Parallelism par = {}) {
    return lemma1_pair(g, g.breaks, sigma, T, par);
}

}  // namespace fourthmoment
