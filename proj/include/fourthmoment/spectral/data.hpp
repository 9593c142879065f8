#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"

namespace fourthmoment {

/// One cusp-form record: spectral parameter kappa_j and the weight
/// alpha_j H_j(1/2)^3 entering the explicit formula.
struct SpectralDatum {
    double kappa = 0.0;
    double alpha_h3 = 0.0;
};

/// Records sorted by strictly increasing kappa.
class SpectralData {
   public:
    SpectralData() = default;
    explicit SpectralData(std::vector<SpectralDatum> records) : r_(std::move(records)) {
        for (std::size_t i = 0; i < r_.size(); ++i) {
            if (!(r_[i].kappa > 0.0 && std::isfinite(r_[i].kappa))) throw DomainError("spectral record " + std::to_string(i) + ": kappa must be positive");
            if (!std::isfinite(r_[i].alpha_h3)) throw DomainError("spectral record " + std::to_string(i) + ": weight not finite");
            if (i && !(r_[i].kappa > r_[i - 1].kappa)) throw DomainError("spectral record " + std::to_string(i) + ": kappa not ascending");
        }
    }

    const std::vector<SpectralDatum>& records() const noexcept { return r_; }
    std::size_t size() const noexcept { return r_.size(); }
    bool empty() const noexcept { return r_.empty(); }
    double max_kappa() const noexcept { return r_.empty() ? 0.0 : r_.back().kappa; }
    auto begin() const noexcept { return r_.begin(); }
    auto end() const noexcept { return r_.end(); }

    /// True when every weight is >= 0, so partial sums are monotone.
    bool nonnegative() const noexcept {
        return std::all_of(r_.begin(), r_.end(), [](const SpectralDatum& d) { return d.alpha_h3 >= 0.0; });
    }

    /// Index range of records with lo <= kappa <= hi.
    std::pair<std::size_t, std::size_t> window(double lo, double hi) const {
        const auto first = std::lower_bound(r_.begin(), r_.end(), lo, [](const SpectralDatum& d, double v) { return d.kappa < v; });
        const auto last = std::upper_bound(first, r_.end(), hi, [](double v, const SpectralDatum& d) { return v < d.kappa; });
        return {static_cast<std::size_t>(first - r_.begin()), static_cast<std::size_t>(last - r_.begin())};
    }

   private:
    std::vector<SpectralDatum> r_;
};

inline const std::vector<std::string>& spectral_csv_header() {
    static const std::vector<std::string> h{"kappa", "alpha_h3"};
    return h;
}

/// Parses `kappa,alpha_h3` rows. Out-of-order rows are rejected with the
/// offending line number; an empty stream gives no records.
inline SpectralData parse_spectral(std::istream& in, const std::string& name = "spectral data") {
    const auto table = csv::read(in);
    if (table.header.empty()) return {};
    csv::expect_header(table, spectral_csv_header(), name);
    std::vector<SpectralDatum> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        SpectralDatum d{csv::parse_double(row.fields[0], row.line), csv::parse_double(row.fields[1], row.line)};
        if (!(d.kappa > 0.0) || !std::isfinite(d.kappa)) throw ParseError("kappa must be positive and finite", row.line);
        if (!std::isfinite(d.alpha_h3)) throw ParseError("alpha_h3 must be finite", row.line);
        if (!out.empty() && !(d.kappa > out.back().kappa))
            throw ParseError("kappa " + row.fields[0] + " is not above the previous row (data must ascend)", row.line);
        out.push_back(d);
    }
    return SpectralData(std::move(out));
}

inline SpectralData load_spectral(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open " + path);
    return parse_spectral(in, path);
}

}  // namespace fourthmoment
