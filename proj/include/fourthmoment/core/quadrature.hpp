#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fourthmoment/core/errors.hpp"

namespace fourthmoment {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on P_N.
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    static const GaussLegendre& get() {
        static const GaussLegendre rule = make();
        return rule;
    }

   private:
    static GaussLegendre make() {
        GaussLegendre r;
        for (std::size_t i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }
};

/// Composite 8-point Gauss-Legendre over [a, b] with panels no longer than
/// max_panel. Works for any f returning a vector-space value.
template <class F>
auto gl_integrate(F&& f, double a, double b, double max_panel) {
    using R = decltype(f(a));
    R total{};
    if (!(b > a)) return total;
    const auto& rule = GaussLegendre<8>::get();
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
    const double len = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + len * static_cast<double>(p);
        const double mid = lo + 0.5 * len;
        R part{};
        for (std::size_t k = 0; k < 8; ++k) part += rule.weights[k] * f(mid + 0.5 * len * rule.nodes[k]);
        total += 0.5 * len * part;
    }
    return total;
}

/// Samples of a real function on the uniform lattice x0 + i*h.
class UniformSamples {
   public:
    UniformSamples() = default;
    UniformSamples(double x0, double h, std::vector<double> values) : x0_(x0), h_(h), v_(std::move(values)) {}

    double x0() const noexcept { return x0_; }
    double step() const noexcept { return h_; }
    std::size_t size() const noexcept { return v_.size(); }
    double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * h_; }
    double x_last() const noexcept { return v_.empty() ? x0_ : x(v_.size() - 1); }
    std::span<const double> values() const noexcept { return v_; }
    double operator[](std::size_t i) const noexcept { return v_[i]; }

    bool covers(double a, double b, double slack = 1e-9) const noexcept {
        if (v_.empty()) return false;
        const double tol = slack * h_;
        return a >= x0_ - tol && b <= x_last() + tol;
    }

    /// Six-point Lagrange interpolation, stencil centred on x where possible.
    double interpolate(double x) const {
        const std::size_t n = v_.size();
        if (n == 0) throw CoverageError("interpolation on empty samples");
        if (n == 1) return v_[0];
        const std::size_t order = std::min<std::size_t>(6, n);
        const double pos = (x - x0_) / h_;
        long start = static_cast<long>(std::floor(pos)) - static_cast<long>(order / 2 - 1);
        start = std::clamp<long>(start, 0, static_cast<long>(n - order));
        const double theta = pos - static_cast<double>(start);
        double sum = 0.0;
        for (std::size_t k = 0; k < order; ++k) {
            double w = 1.0;
            for (std::size_t m = 0; m < order; ++m) {
                if (m == k) continue;
                w *= (theta - static_cast<double>(m)) / (static_cast<double>(k) - static_cast<double>(m));
            }
            sum += w * v_[static_cast<std::size_t>(start) + k];
        }
        return sum;
    }

   private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> v_;
};

/// Running integral of uniformly sampled data: composite Simpson on the
/// panels [x_{2k}, x_{2k+2}], with the panel's interpolating quadratic
/// integrated exactly for points inside a panel. A trailing single interval
/// uses the quadratic through the last three samples. Differences of the
/// cumulative function make every interval integral exactly additive.
class CumulativeIntegral {
   public:
    CumulativeIntegral() = default;
    explicit CumulativeIntegral(UniformSamples samples) : s_(std::move(samples)) {
        const std::size_t n = s_.size();
        node_.assign(n, 0.0);
        if (n < 2) return;
        const double h = s_.step();
        if (n == 2) {
            node_[1] = 0.5 * h * (s_[0] + s_[1]);
            return;
        }
        std::size_t i = 0;
        for (; i + 2 < n; i += 2) {
            node_[i + 1] = node_[i] + h / 12.0 * (5.0 * s_[i] + 8.0 * s_[i + 1] - s_[i + 2]);
            node_[i + 2] = node_[i] + h / 3.0 * (s_[i] + 4.0 * s_[i + 1] + s_[i + 2]);
        }
        if (i + 1 < n) node_[i + 1] = node_[i] + h / 12.0 * (-s_[i - 1] + 8.0 * s_[i] + 5.0 * s_[i + 1]);
    }

    const UniformSamples& samples() const noexcept { return s_; }
    std::span<const double> at_nodes() const noexcept { return node_; }

    /// Integral from samples().x0() to x.
    double from_start(double x) const {
        const std::size_t n = s_.size();
        if (!s_.covers(x, x)) throw CoverageError("integration limit " + std::to_string(x) + " outside sampled range");
        if (n < 2) return 0.0;
        const double h = s_.step();
        const double pos = std::clamp((x - s_.x0()) / h, 0.0, static_cast<double>(n - 1));
        if (n == 2) {
            const double th = pos;
            return h * (s_[0] * (th - 0.5 * th * th) + s_[1] * 0.5 * th * th);
        }
        const std::size_t full_end = 2 * ((n - 1) / 2);
        if (pos >= static_cast<double>(full_end)) {
            if (full_end == n - 1) return node_[n - 1];
            // trailing single interval: quadratic through the last three samples
            const std::size_t c = full_end;
            const double th = pos - static_cast<double>(c);
            const double fm = s_[c - 1], f0 = s_[c], fp = s_[c + 1];
            const double t2 = th * th, t3 = t2 * th;
            return node_[c] + h * (fm * (t3 / 3.0 - t2 / 2.0) / 2.0 + f0 * (th - t3 / 3.0) + fp * (t3 / 3.0 + t2 / 2.0) / 2.0);
        }
        const auto panel = std::min(static_cast<std::size_t>(std::floor(pos / 2.0)) * 2, full_end - 2);
        const double th = pos - static_cast<double>(panel);
        const double f0 = s_[panel], f1 = s_[panel + 1], f2 = s_[panel + 2];
        const double t2 = th * th, t3 = t2 * th;
        return node_[panel] + h * (f0 * (t3 / 3.0 - 1.5 * t2 + 2.0 * th) / 2.0 - f1 * (t3 / 3.0 - t2) + f2 * (t3 / 3.0 - t2 / 2.0) / 2.0);
    }

    double integral(double a, double b) const { return from_start(b) - from_start(a); }

   private:
    UniformSamples s_;
    std::vector<double> node_;
};

}  // namespace fourthmoment
