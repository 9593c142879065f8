#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/parallel.hpp"
#include "fourthmoment/core/quadrature.hpp"
#include "fourthmoment/zeta/riemann_siegel.hpp"

namespace fourthmoment {

struct CriticalSample {
    double t = 0.0;
    Complex z;
    double z_abs4 = 0.0;
    double err = 0.0;
};

inline CriticalSample critical_sample(double t) {
    const auto e = zeta_half_bounded(t);
    const double m2 = std::norm(e.value);
    return {t, e.value, m2 * m2, e.err};
}

/// Number of lattice points t_min + i*step that do not exceed t_max.
inline std::size_t grid_point_count(double t_min, double t_max, double step) {
    return static_cast<std::size_t>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
}

/// Immutable uniform table of |zeta(1/2+ix)|^4. Construction also builds the
/// running integral of the fourth power so that moment queries are O(1).
class ZetaGrid {
   public:
    ZetaGrid(double t_min, double t_max, double step, double err_budget, std::vector<CriticalSample> samples)
        : t_min_(t_min), t_max_(t_max), step_(step), err_budget_(err_budget), samples_(std::move(samples)) {
        validate();
        std::vector<double> abs4(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) abs4[i] = samples_[i].z_abs4;
        cumulative_ = CumulativeIntegral(UniformSamples(t_min_, step_, std::move(abs4)));
    }

    double t_min() const noexcept { return t_min_; }
    double t_max() const noexcept { return t_max_; }
    double step() const noexcept { return step_; }
    double err_budget() const noexcept { return err_budget_; }
    const std::vector<CriticalSample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double last_t() const noexcept { return samples_.back().t; }

    const UniformSamples& abs4() const noexcept { return cumulative_.samples(); }
    const CumulativeIntegral& abs4_integral() const noexcept { return cumulative_; }

    bool covers(double a, double b) const noexcept { return abs4().covers(a, b); }

    void require_coverage(double a, double b, const char* what) const {
        if (!covers(a, b)) {
            std::ostringstream msg;
            msg << what << ": grid [" << t_min_ << ", " << last_t() << "] does not cover [" << a << ", " << b << "]";
            throw CoverageError(msg.str());
        }
    }

    /// |zeta(1/2+ix)|^4 between lattice points; |x| is used for x < 0.
    double abs4_at(double x) const { return abs4().interpolate(std::abs(x)); }

   private:
    void validate() const {
        if (!(t_min_ >= 0.0 && t_max_ > t_min_ && step_ > 0.0 && err_budget_ > 0.0))
            throw DomainError("grid parameters must satisfy 0 <= t_min < t_max, step > 0, err_budget > 0");
        if (samples_.size() != grid_point_count(t_min_, t_max_, step_))
            throw Error(ErrorKind::input, "grid sample count does not match its parameters");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (s.t != t_min_ + static_cast<double>(i) * step_)
                throw Error(ErrorKind::input, "grid sample " + std::to_string(i) + " is off the uniform lattice");
            if (!(s.err >= 0.0 && std::isfinite(s.err) && s.err <= err_budget_))
                throw BudgetError("grid sample at t = " + csv::num(s.t) + " exceeds the error budget");
        }
    }

    double t_min_, t_max_, step_, err_budget_;
    std::vector<CriticalSample> samples_;
    CumulativeIntegral cumulative_;
};

/// Evaluates zeta on t_min + i*step. Each sample is computed independently,
/// so the result does not depend on par.threads.
inline ZetaGrid build_grid(double t_min, double t_max, double step, double err_budget, Parallelism par = {}) {
    if (!(t_min >= 0.0 && t_max > t_min && step > 0.0 && err_budget > 0.0))
        throw DomainError("build_grid requires 0 <= t_min < t_max, step > 0, err_budget > 0");
    const std::size_t n = grid_point_count(t_min, t_max, step);
    std::vector<CriticalSample> samples(n);
    parallel_for(n, par, [&](std::size_t i) { samples[i] = critical_sample(t_min + static_cast<double>(i) * step); });
    for (const auto& s : samples)
        if (!(s.err <= err_budget))
            throw BudgetError("cannot certify |error| <= " + csv::num(err_budget) + " at t = " + csv::num(s.t) +
                              " (bound " + csv::num(s.err) + ")");
    return ZetaGrid(t_min, t_max, step, err_budget, std::move(samples));
}

// ---- persistence ----------------------------------------------------------

inline std::string grid_file_name(double t_min, double t_max, double step) {
    return "zeta_grid_" + csv::num(t_min) + "_" + csv::num(t_max) + "_" + csv::num(step) + ".csv";
}

inline const std::vector<std::string>& grid_csv_header() {
    static const std::vector<std::string> h{"t", "re_z", "im_z", "z_abs4", "err"};
    return h;
}

inline std::string grid_metadata_line(double t_min, double t_max, double step, double err_budget, std::size_t count) {
    return "zeta-grid t_min=" + csv::num(t_min) + " t_max=" + csv::num(t_max) + " step=" + csv::num(step) +
           " err_budget=" + csv::num(err_budget) + " count=" + std::to_string(count);
}

inline std::string grid_to_csv(const ZetaGrid& g) {
    std::string out = "# " + grid_metadata_line(g.t_min(), g.t_max(), g.step(), g.err_budget(), g.size()) + "\n";
    out += csv::join(grid_csv_header()) + "\n";
    for (const auto& s : g.samples())
        out += csv::join({csv::num(s.t), csv::num(s.z.real()), csv::num(s.z.imag()), csv::num(s.z_abs4), csv::num(s.err)}) + "\n";
    return out;
}

inline void save_grid(const ZetaGrid& g, const std::string& path) { csv::write_file(path, grid_to_csv(g)); }

struct GridMetadata {
    double t_min = 0, t_max = 0, step = 0, err_budget = 0;
    std::size_t count = 0;
};

/// Parses the "# zeta-grid ..." provenance line; nullopt when malformed.
inline std::optional<GridMetadata> parse_grid_metadata(const std::string& line) {
    std::istringstream in(line);
    std::string tag;
    if (!(in >> tag) || tag != "zeta-grid") return std::nullopt;
    GridMetadata m;
    int seen = 0;
    std::string kv;
    while (in >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) return std::nullopt;
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
            if (key == "count") {
                m.count = std::stoul(val);
            } else {
                const double v = csv::parse_double(val, 1);
                if (key == "t_min") m.t_min = v;
                else if (key == "t_max") m.t_max = v;
                else if (key == "step") m.step = v;
                else if (key == "err_budget") m.err_budget = v;
                else return std::nullopt;
            }
        } catch (...) {
            return std::nullopt;
        }
        ++seen;
    }
    if (seen != 5) return std::nullopt;
    return m;
}

/// Reads a grid file and checks it against its own provenance line.
inline ZetaGrid load_grid(const std::string& path) {
    const auto table = csv::read_file(path);
    if (table.comments.empty()) throw Error(ErrorKind::input, path + ": missing zeta-grid header line (integrity check failed)");
    const auto meta = parse_grid_metadata(table.comments.front());
    if (!meta) throw Error(ErrorKind::input, path + ": corrupt zeta-grid header line (integrity check failed)");
    csv::expect_header(table, grid_csv_header(), path);
    if (table.rows.size() != meta->count)
        throw Error(ErrorKind::input, path + ": row count " + std::to_string(table.rows.size()) + " does not match header count " +
                                          std::to_string(meta->count) + " (integrity check failed)");
    std::vector<CriticalSample> samples;
    samples.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        CriticalSample s;
        s.t = csv::parse_double(row.fields[0], row.line);
        s.z = Complex(csv::parse_double(row.fields[1], row.line), csv::parse_double(row.fields[2], row.line));
        s.z_abs4 = csv::parse_double(row.fields[3], row.line);
        s.err = csv::parse_double(row.fields[4], row.line);
        samples.push_back(s);
    }
    return ZetaGrid(meta->t_min, meta->t_max, meta->step, meta->err_budget, std::move(samples));
}

}  // namespace fourthmoment
