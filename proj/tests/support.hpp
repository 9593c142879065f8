#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fourthmoment/moment/fourth_moment.hpp"
#include "fourthmoment/zeta/grid.hpp"

namespace testsupport {

using fourthmoment::Complex;

/// Real grids shared by the tests of one binary.
inline const fourthmoment::ZetaGrid& grid_300() {
    static const auto g = fourthmoment::build_grid(0.0, 300.0, 0.01, 1e-8);
    return g;
}

inline const fourthmoment::P4Fit& fit_300() {
    static const auto f = fourthmoment::fit_p4(grid_300(), 2.0, 290.0);
    return f;
}

inline const fourthmoment::ErrorTermSeries& series_300() {
    static const auto s = fourthmoment::make_error_term_series(grid_300(), fit_300().poly, 1.0, 300.0);
    return s;
}

/// Grid whose samples come from an arbitrary function in place of |zeta|^4.
template <class F>
fourthmoment::ZetaGrid synthetic_grid(double t_min, double t_max, double step, F&& abs4) {
    const std::size_t n = fourthmoment::grid_point_count(t_min, t_max, step);
    std::vector<fourthmoment::CriticalSample> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_min + static_cast<double>(i) * step;
        const double v = abs4(t);
        s[i] = {t, Complex(std::pow(v, 0.25), 0.0), v, 0.0};
    }
    return fourthmoment::ZetaGrid(t_min, t_max, step, 1e-8, std::move(s));
}

/// Composite Simpson for uniformly sampled values (odd count).
inline double simpson(const std::vector<double>& y, double h) {
    double acc = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
    return acc * h / 3.0;
}

inline Complex simpson(const std::vector<Complex>& y, double h) {
    Complex acc = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
    return acc * (h / 3.0);
}

/// |zeta(1/2+it)|^4 evaluated directly on a fine lattice of [a, b].
inline std::vector<double> direct_abs4(double a, double b, std::size_t intervals) {
    std::vector<double> v(intervals + 1);
    const double h = (b - a) / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double m = std::norm(fourthmoment::zeta_half(a + h * static_cast<double>(i)));
        v[i] = m * m;
    }
    return v;
}

}  // namespace testsupport
