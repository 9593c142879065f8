#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"

namespace fourthmoment::cli {

/// Everything a run needs. Keys of the flat `key = value` file and the
/// command-line flags are the field names below.
struct RunConfig {
    // zeta grid
    double grid_t_min = 0.0;
    double grid_t_max = 1700.0;
    double grid_step = 0.01;
    double err_budget = 1e-8;
    // P_4: "fit" or a path to a file of a0..a4
    std::string poly = "fit";
    double fit_T_lo = 2.0;
    double fit_T_hi = 1000.0;
    // fourth moment / E_2
    std::vector<double> T{100, 200, 400, 800, 1600};
    // transforms: truncation heights, abscissae and lines
    std::string z2_X = "auto";  ///< "auto" = (largest meansq_T)^{6/5}
    double k_X = 200.0;
    std::vector<double> transform_t{-50, -10, 0, 10, 50};
    std::vector<double> sigma_z2{5.0 / 6.0, 1.0, 1.25};
    std::vector<double> sigma_k{7.0 / 6.0, 5.0 / 3.0, 13.0 / 6.0};
    // mean-square scans
    std::vector<double> meansq_T{10, 20, 40, 80};
    double meansq_step = 0.05;
    // smoothed moment and spectral side
    std::vector<double> xi{0.5, 0.8};
    std::vector<double> smoothed_t{50, 75, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    std::string spectral = "data/spectral_sample.csv";
    std::vector<double> spectral_T{10, 20, 40, 80, 160, 300};
    std::vector<double> spectral_K{20, 40, 60, 80, 100, 150, 200, 250};
    double spectral_G = 10.0;
    std::vector<double> j_sigma{1.5, 2.5};
    std::vector<double> j_t{0, 10};
    double j_x_max = 100.0;
    double partition_delta = 0.05;
    int partition_J = 6;
    // execution only; never echoed into outputs
    std::string out = "out";
    unsigned threads = 1;
};

namespace detail {

inline double parse_number(const std::string& key, const std::string& v) {
    try {
        return csv::parse_double(v, 0);
    } catch (const ParseError&) {
        throw DomainError("config key '" + key + "': not a number: '" + v + "'");
    }
}

/// Comma list; an item a:b:h expands to a, a+h, ... <= b.
inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : csv::split(v)) {
        if (item.empty()) continue;
        const auto parts = csv::split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_number(key, item));
        } else if (parts.size() == 3) {
            const double a = parse_number(key, parts[0]), b = parse_number(key, parts[1]), h = parse_number(key, parts[2]);
            if (!(h > 0.0) || b < a) throw DomainError("config key '" + key + "': bad range '" + item + "'");
            const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
            for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
        } else {
            throw DomainError("config key '" + key + "': bad list item '" + item + "'");
        }
    }
    return out;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + csv::num(v[i]);
    return out;
}

}  // namespace detail

/// Key table: one setter and one printer per field, in echo order.
struct ConfigField {
    std::string key;
    std::string help;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    bool echoed = true;
};

inline const std::vector<ConfigField>& config_fields() {
    using detail::format_list;
    using detail::parse_list;
    using detail::parse_number;
#define FM_NUM(name, help) \
    ConfigField{#name, help, [](RunConfig& c, const std::string& v) { c.name = parse_number(#name, v); }, [](const RunConfig& c) { return csv::num(c.name); }}
#define FM_LIST(name, help) \
    ConfigField{#name, help, [](RunConfig& c, const std::string& v) { c.name = parse_list(#name, v); }, [](const RunConfig& c) { return format_list(c.name); }}
#define FM_STR(name, help) \
    ConfigField{#name, help, [](RunConfig& c, const std::string& v) { c.name = v; }, [](const RunConfig& c) { return c.name; }}
    static const std::vector<ConfigField> fields{
        FM_NUM(grid_t_min, "grid start height"),
        FM_NUM(grid_t_max, "grid end height"),
        FM_NUM(grid_step, "grid spacing"),
        FM_NUM(err_budget, "per-sample error budget on |zeta|"),
        FM_STR(poly, "'fit' or a file with a0..a4"),
        FM_NUM(fit_T_lo, "P4 fit range start"),
        FM_NUM(fit_T_hi, "P4 fit range end"),
        FM_LIST(T, "heights for fourth-moment and E2 tables"),
        FM_STR(z2_X, "Z2 truncation height, or 'auto' = (max meansq_T)^(6/5)"),
        FM_NUM(k_X, "K truncation height"),
        FM_LIST(transform_t, "t values for transform tables"),
        FM_LIST(sigma_z2, "sigma values for Z2"),
        FM_LIST(sigma_k, "sigma values for K"),
        FM_LIST(meansq_T, "upper limits of mean-square scans"),
        FM_NUM(meansq_step, "t step of mean-square scans"),
        FM_LIST(xi, "Gaussian window exponents"),
        FM_LIST(smoothed_t, "heights for smoothed-moment tables"),
        FM_STR(spectral, "spectral data CSV (kappa,alpha_h3)"),
        FM_LIST(spectral_T, "partial-sum heights"),
        FM_LIST(spectral_K, "short-interval centres"),
        FM_NUM(spectral_G, "short-interval half-width"),
        FM_LIST(j_sigma, "sigma values for J(s, xi)"),
        FM_LIST(j_t, "t values for J(s, xi)"),
        FM_NUM(j_x_max, "upper limit of the J(s, xi) integral"),
        FM_NUM(partition_delta, "delta in X = t^(1/(1-xi) - delta)"),
        ConfigField{"partition_J", "number of partition pieces",
                    [](RunConfig& c, const std::string& v) {
                        const double d = parse_number("partition_J", v);
                        if (d != std::floor(d) || d < 2 || d > 60) throw DomainError("config key 'partition_J' must be an integer in [2, 60]");
                        c.partition_J = static_cast<int>(d);
                    },
                    [](const RunConfig& c) { return std::to_string(c.partition_J); }},
        ConfigField{"out", "output directory", [](RunConfig& c, const std::string& v) { c.out = v; },
                    [](const RunConfig& c) { return c.out; }, false},
        ConfigField{"threads", "worker threads",
                    [](RunConfig& c, const std::string& v) {
                        const double d = parse_number("threads", v);
                        if (d != std::floor(d) || d < 1 || d > 1024) throw DomainError("config key 'threads' must be an integer in [1, 1024]");
                        c.threads = static_cast<unsigned>(d);
                    },
                    [](const RunConfig& c) { return std::to_string(c.threads); }, false},
    };
#undef FM_NUM
#undef FM_LIST
#undef FM_STR
    return fields;
}

inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    for (const auto& f : config_fields())
        if (f.key == key) {
            f.set(c, value);
            return;
        }
    throw DomainError("unknown config key '" + key + "'");
}

/// Applies `key = value` lines; '#' starts a comment.
inline void apply_config_text(RunConfig& c, std::istream& in, const std::string& name) {
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError(name + ":" + std::to_string(no) + ": expected 'key = value'");
        const auto key = csv::split(line.substr(0, eq), '\n').front();
        const auto value = csv::split(line.substr(eq + 1), '\n').front();
        try {
            set_config_value(c, key, value);
        } catch (const DomainError& e) {
            throw DomainError(name + ":" + std::to_string(no) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open config " + path);
    apply_config_text(c, in, path);
}

/// Checks every field against the domain of the operation it feeds.
inline void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw DomainError("config: " + msg);
    };
    auto increasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1])) return false;
        return true;
    };
    need(c.grid_t_min >= 0.0 && c.grid_t_max > c.grid_t_min, "need 0 <= grid_t_min < grid_t_max");
    need(c.grid_step > 0.0 && c.err_budget > 0.0, "grid_step and err_budget must be positive");
    need(c.fit_T_lo >= 1.0 && c.fit_T_hi - c.fit_T_lo >= 100.0, "fit range needs fit_T_lo >= 1 and length >= 100");
    need(!c.T.empty() && increasing(c.T) && c.T.front() > 1.0, "T must be increasing and above 1");
    need(c.z2_X == "auto" || detail::parse_number("z2_X", c.z2_X) >= 1.0, "z2_X must be 'auto' or >= 1");
    need(c.k_X > 1.0, "k_X must exceed 1");
    for (double s : c.sigma_z2) need(s > 0.0, "sigma_z2 values must be positive");
    for (double s : c.sigma_k) need(s > 1.0, "sigma_k values must exceed 1");
    need(c.meansq_T.size() >= 4 && increasing(c.meansq_T) && c.meansq_T.front() > 1.0, "meansq_T needs >= 4 increasing values above 1");
    need(c.meansq_step > 0.0 && c.meansq_step <= 0.05, "meansq_step must lie in (0, 0.05]");
    need(!c.xi.empty(), "xi list is empty");
    for (double x : c.xi) need(x >= 0.5 && x < 1.0, "xi values must lie in [1/2, 1)");
    need(!c.smoothed_t.empty() && increasing(c.smoothed_t) && c.smoothed_t.front() > 0.0, "smoothed_t must be increasing and positive");
    need(increasing(c.spectral_T), "spectral_T must be increasing");
    need(c.spectral_G > 0.0, "spectral_G must be positive");
    need(c.j_x_max >= 1.0, "j_x_max must be >= 1");
    need(c.partition_delta > 0.0, "partition_delta must be positive");
}

/// `key=value` pairs for provenance headers. Execution-only settings
/// (output directory, thread count) are left out so outputs do not depend on them.
inline std::vector<std::string> config_echo(const RunConfig& c) {
    std::vector<std::string> out;
    for (const auto& f : config_fields())
        if (f.echoed) out.push_back(f.key + "=" + f.get(c));
    return out;
}

}  // namespace fourthmoment::cli
