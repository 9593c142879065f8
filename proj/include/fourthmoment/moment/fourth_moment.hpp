#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/quadrature.hpp"
#include "fourthmoment/moment/polynomial.hpp"
#include "fourthmoment/zeta/grid.hpp"

namespace fourthmoment {

/// Integral of |zeta(1/2+it)|^4 over [0, T] on the grid's Simpson rule.
inline double fourth_moment(const ZetaGrid& grid, double T) {
    if (!(T >= 0.0)) throw DomainError("fourth_moment requires T >= 0");
    if (grid.t_min() != 0.0) throw CoverageError("fourth_moment needs a grid starting at t = 0");
    grid.require_coverage(0.0, T, "fourth_moment");
    return grid.abs4_integral().from_start(T);
}

inline double fourth_moment_between(const ZetaGrid& grid, double a, double b) {
    grid.require_coverage(a, b, "fourth_moment_between");
    return grid.abs4_integral().integral(a, b);
}

/// E_2(T) = int_0^T |zeta|^4 - T P_4(log T).
inline double e2(const ZetaGrid& grid, const MomentPolynomial& poly, double T) {
    const double moment = fourth_moment(grid, T);
    if (T == 0.0) return moment;
    return moment - T * p4_eval(poly, std::log(T));
}

/// Centred difference of E_2 at x minus the predicted derivative
/// |zeta(1/2+ix)|^4 - Q_4(log x), with difference step h.
inline double e2_derivative_residual(const ZetaGrid& grid, const MomentPolynomial& poly, double x, double h) {
    const double slope = (e2(grid, poly, x + h) - e2(grid, poly, x - h)) / (2.0 * h);
    return slope - (grid.abs4_at(x) - q4_eval(poly, std::log(x)));
}

// ---- error-term series ------------------------------------------------------

struct ErrorTermSeries {
    std::vector<double> T_values;
    std::vector<double> e2_values;
    MomentPolynomial poly;

    void validate() const {
        if (T_values.size() != e2_values.size()) throw DomainError("ErrorTermSeries: length mismatch");
        for (std::size_t i = 1; i < T_values.size(); ++i)
            if (!(T_values[i] > T_values[i - 1])) throw DomainError("ErrorTermSeries: T values must increase strictly");
        if (!T_values.empty() && !(T_values.front() >= 1.0 - 1e-12)) throw DomainError("ErrorTermSeries: T values must be >= 1");
    }

    std::size_t size() const noexcept { return T_values.size(); }

    /// Uniform view of the series when its abscissae form a lattice.
    std::optional<UniformSamples> uniform(const std::vector<double>& values) const {
        const std::size_t n = T_values.size();
        if (n < 2) return std::nullopt;
        const double h = (T_values.back() - T_values.front()) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(T_values[i] - (T_values.front() + static_cast<double>(i) * h)) > 1e-9 * h) return std::nullopt;
        return UniformSamples(T_values.front(), h, values);
    }
    std::optional<UniformSamples> uniform() const { return uniform(e2_values); }

    UniformSamples require_uniform(const char* what) const {
        auto u = uniform();
        if (!u) throw DomainError(std::string(what) + " needs an error-term series on a uniform lattice");
        return *u;
    }

    void require_coverage(double a, double b, const char* what) const {
        const auto u = uniform();
        const bool ok = u ? u->covers(a, b) : (!T_values.empty() && a >= T_values.front() && b <= T_values.back());
        if (!ok) {
            std::ostringstream msg;
            msg << what << ": error-term series does not cover [" << a << ", " << b << "]";
            throw CoverageError(msg.str());
        }
    }
};

/// E_2 at every grid point of [T_from, T_to].
inline ErrorTermSeries make_error_term_series(const ZetaGrid& grid, const MomentPolynomial& poly, double T_from, double T_to) {
    if (!(T_from >= 1.0 - 1e-12 && T_to > T_from)) throw DomainError("error-term series needs 1 <= T_from < T_to");
    grid.require_coverage(0.0, T_to, "make_error_term_series");
    const double h = grid.step();
    const auto first = static_cast<std::size_t>(std::ceil((T_from - grid.t_min()) / h - 1e-9));
    ErrorTermSeries s;
    s.poly = poly;
    for (std::size_t i = first; i < grid.size(); ++i) {
        const double T = grid.samples()[i].t;
        if (T > T_to + 1e-9 * h) break;
        s.T_values.push_back(T);
        s.e2_values.push_back(grid.abs4_integral().at_nodes()[i] - T * p4_eval(poly, std::log(T)));
    }
    return s;
}

/// Running integrals of E_2^2 and E_2^4 over a series; each query is O(1).
class E2Moments {
   public:
    explicit E2Moments(const ErrorTermSeries& series) : series_(series) {
        series.validate();
        if (series.size() < 2) throw CoverageError("E2 moments need at least two samples");
        std::vector<double> sq(series.size()), quad(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double v = series.e2_values[i] * series.e2_values[i];
            sq[i] = v;
            quad[i] = v * v;
        }
        if (auto u = series.uniform(sq)) {
            square_ = CumulativeIntegral(*u);
            fourth_ = CumulativeIntegral(*series.uniform(quad));
            uniform_ = true;
        } else {
            trap_sq_ = trapezoid(series.T_values, sq);
            trap_quad_ = trapezoid(series.T_values, quad);
        }
    }

    double mean_square(double T) const { return integrate(T, square_, trap_sq_, 2); }
    double fourth_power(double T) const { return integrate(T, fourth_, trap_quad_, 4); }

   private:
    static std::vector<double> trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> c(x.size(), 0.0);
        for (std::size_t i = 1; i < x.size(); ++i) c[i] = c[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        return c;
    }

    double integrate(double T, const CumulativeIntegral& uni, const std::vector<double>& trap, int power) const {
        series_.require_coverage(1.0, T, "E2 moment");
        if (T <= 1.0) return 0.0;
        if (uniform_) return uni.integral(1.0, T);
        const auto& x = series_.T_values;
        auto at = [&](double v) {
            const auto it = std::upper_bound(x.begin(), x.end(), v);
            const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1), x.size() - 1) - 1;
            const double e0 = series_.e2_values[i], e1 = series_.e2_values[i + 1];
            const double w = (v - x[i]) / (x[i + 1] - x[i]);
            const double y0 = std::pow(e0, power), y1 = std::pow(e1, power);
            const double yv = y0 + w * (y1 - y0);
            return trap[i] + 0.5 * (v - x[i]) * (y0 + yv);
        };
        return at(T) - at(1.0);
    }

    const ErrorTermSeries& series_;
    bool uniform_ = false;
    CumulativeIntegral square_, fourth_;
    std::vector<double> trap_sq_, trap_quad_;
};

/// int_1^T E_2(t)^2 dt.
inline double e2_mean_square(const ErrorTermSeries& series, double T) { return E2Moments(series).mean_square(T); }

/// int_1^T E_2(t)^4 dt.
inline double e2_fourth_moment(const ErrorTermSeries& series, double T) { return E2Moments(series).fourth_power(T); }

// ---- fitting P_4 ---------------------------------------------------------------

inline constexpr double kFitConditionLimit = 1e12;

struct P4Fit {
    MomentPolynomial poly;
    double condition = 0.0;  ///< condition number of the normal matrix
    std::size_t samples = 0;
};

/// Least-squares fit of moment(T) ~ T P_4(log T) with a_4 pinned. Residuals
/// are taken relative to T, i.e. the fit minimises sum (moment/T - P_4(log T))^2.
inline P4Fit fit_p4_samples(const std::vector<double>& T, const std::vector<double>& moment) {
    if (T.size() != moment.size() || T.size() < 4) throw DomainError("fit_p4 needs at least four (T, moment) pairs");
    const auto n = static_cast<Eigen::Index>(T.size());
    Eigen::MatrixXd A(n, 4);
    Eigen::VectorXd b(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double L = std::log(T[static_cast<std::size_t>(k)]);
        double p = 1.0;
        for (int j = 0; j < 4; ++j, p *= L) A(k, j) = p;
        b(k) = moment[static_cast<std::size_t>(k)] / T[static_cast<std::size_t>(k)] - kP4Leading * p;
    }
    const Eigen::Matrix4d normal = A.transpose() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(normal);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(condition <= kFitConditionLimit))
        throw ConditioningError("fit_p4: normal equations are ill-conditioned (condition " + csv::num(condition) + ")", condition);
    const Eigen::Vector4d x = A.colPivHouseholderQr().solve(b);
    return {MomentPolynomial({x(0), x(1), x(2), x(3)}), condition, T.size()};
}

/// Fits P_4 to the grid's fourth moment at up to max_samples evenly strided
/// lattice points of [T_lo, T_hi].
inline P4Fit fit_p4(const ZetaGrid& grid, double T_lo, double T_hi, std::size_t max_samples = 20000) {
    if (!(T_lo >= 1.0 && T_hi - T_lo >= 100.0)) throw DomainError("fit_p4 needs T_lo >= 1 and a range of length >= 100");
    if (grid.t_min() != 0.0) throw CoverageError("fit_p4 needs a grid starting at t = 0");
    grid.require_coverage(T_lo, T_hi, "fit_p4");
    const double h = grid.step();
    const auto first = static_cast<std::size_t>(std::ceil(T_lo / h - 1e-9));
    const auto last = static_cast<std::size_t>(std::floor(T_hi / h + 1e-9));
    const std::size_t count = last - first + 1;
    const std::size_t stride = std::max<std::size_t>(1, (count + max_samples - 1) / max_samples);
    std::vector<double> Ts, Fs;
    for (std::size_t i = first; i <= last; i += stride) {
        Ts.push_back(grid.samples()[i].t);
        Fs.push_back(grid.abs4_integral().at_nodes()[i]);
    }
    return fit_p4_samples(Ts, Fs);
}

// ---- persistence ----------------------------------------------------------

inline std::string polynomial_comment(const MomentPolynomial& poly) {
    std::string out = "P4";
    for (std::size_t j = 0; j < 5; ++j) out += " a" + std::to_string(j) + "=" + csv::num(poly[j]);
    return out;
}

inline std::optional<MomentPolynomial> parse_polynomial_comment(const std::string& line) {
    std::istringstream in(line);
    std::string tag;
    if (!(in >> tag) || tag != "P4") return std::nullopt;
    std::array<double, 5> a{};
    for (std::size_t j = 0; j < 5; ++j) {
        std::string kv;
        if (!(in >> kv)) return std::nullopt;
        const std::string key = "a" + std::to_string(j) + "=";
        if (kv.rfind(key, 0) != 0) return std::nullopt;
        try {
            a[j] = csv::parse_double(kv.substr(key.size()), 1);
        } catch (const ParseError&) {
            return std::nullopt;
        }
    }
    return MomentPolynomial::from_coefficients(a);
}

/// CSV `T,e2` preceded by extra comment lines and the polynomial line.
inline std::string error_series_to_csv(const ErrorTermSeries& s, const std::vector<std::string>& comments = {}) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "# " + polynomial_comment(s.poly) + "\nT,e2\n";
    for (std::size_t i = 0; i < s.size(); ++i) out += csv::num(s.T_values[i]) + "," + csv::num(s.e2_values[i]) + "\n";
    return out;
}

inline ErrorTermSeries load_error_series(const std::string& path) {
    const auto table = csv::read_file(path);
    csv::expect_header(table, {"T", "e2"}, path);
    std::optional<MomentPolynomial> poly;
    for (const auto& c : table.comments)
        if ((poly = parse_polynomial_comment(c))) break;
    if (!poly) throw Error(ErrorKind::input, path + ": missing P4 coefficient comment");
    ErrorTermSeries s;
    s.poly = *poly;
    for (const auto& row : table.rows) {
        s.T_values.push_back(csv::parse_double(row.fields[0], row.line));
        s.e2_values.push_back(csv::parse_double(row.fields[1], row.line));
    }
    s.validate();
    return s;
}

/// Reads a polynomial from a file of `key = value` lines a0..a4 (or the
/// CSV comment form). Used when published coefficients are supplied.
inline MomentPolynomial load_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open " + path);
    std::array<double, 5> a{};
    std::array<bool, 5> seen{};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError("expected 'aj = value'", no);
            continue;
        }
        auto key = csv::split(line.substr(0, eq), '\n').front();
        auto val = csv::split(line.substr(eq + 1), '\n').front();
        if (key.size() != 2 || key[0] != 'a' || key[1] < '0' || key[1] > '4') throw ParseError("unknown key '" + key + "'", no);
        const auto j = static_cast<std::size_t>(key[1] - '0');
        a[j] = csv::parse_double(val, no);
        seen[j] = true;
    }
    if (!seen[4]) a[4] = kP4Leading;
    for (std::size_t j = 0; j < 4; ++j)
        if (!seen[j]) throw Error(ErrorKind::input, path + ": coefficient a" + std::to_string(j) + " missing");
    return MomentPolynomial::from_coefficients(a);
}

}  // namespace fourthmoment
