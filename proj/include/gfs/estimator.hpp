#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gfs/design.hpp"

namespace gfs {

namespace detail {

// pi_kl - pi_k * pi_l computed from exact cell counts; the numerator
// c_kl * G - c_k * c_l stays within __int128.
inline long double sip_gap(Cell c_kl, Cell c_k, Cell c_l, Cell resolution) {
    const __int128 num = static_cast<__int128>(c_kl) * static_cast<__int128>(resolution) -
                         static_cast<__int128>(c_k) * static_cast<__int128>(c_l);
    const long double g = static_cast<long double>(resolution);
    return static_cast<long double>(num) / (g * g);
}

inline void check_units(std::span<const double> values, std::span<const Cell> fip) {
    require(values.size() == fip.size(), "estimator: values and fip sizes differ");
}

} // namespace detail

// Narain-Horvitz-Thompson total: sum of y_k / pi_k over the sample.
inline double nht_total(const Sample& sample, std::span<const double> values,
                        std::span<const Cell> fip, Cell resolution) {
    detail::check_units(values, fip);
    const double g = static_cast<double>(resolution);
    double total = 0.0;
    for (std::uint32_t k : sample) {
        detail::require(k < fip.size(), "nht_total: unit out of range");
        detail::require(fip[k] > 0, "nht_total: zero inclusion probability in sample");
        total += values[k] * g / static_cast<double>(fip[k]);
    }
    return total;
}

// Exact design variance of the NHT total, computed two ways: the
// definitional sum over the enumerated design and the quadratic form in
// the second-order probabilities. The routes must agree; disagreement
// means the design table and its SIP matrix are out of sync.
inline double design_variance(const Design& design, std::span<const double> values,
                              std::span<const Cell> fip) {
    detail::check_units(values, fip);
    detail::require(design.unit_count() == fip.size(), "design_variance: unit count mismatch");
    const std::vector<Cell> derived = first_order(design);
    for (std::size_t k = 0; k < fip.size(); ++k) {
        detail::require(derived[k] == fip[k], "design_variance: design inconsistent with fip");
        detail::require(fip[k] > 0 || values[k] == 0.0,
                        "design_variance: zero inclusion probability with nonzero value");
    }

    const long double g = static_cast<long double>(design.resolution());
    long double total = 0.0L;
    for (std::size_t k = 0; k < fip.size(); ++k) total += values[k];

    long double definitional = 0.0L;
    for (const auto& row : design.table()) {
        long double est = 0.0L;
        for (std::uint32_t k : row.sample)
            est += static_cast<long double>(values[k]) * g / static_cast<long double>(fip[k]);
        const long double p = static_cast<long double>(row.mass) / g;
        const long double d = est - total;
        definitional += p * d * d;
    }

    const SipMatrix sip = sip_from_design(design);
    long double quadratic = 0.0L;
    for (std::size_t k = 0; k < fip.size(); ++k) {
        if (fip[k] == 0) continue;
        const long double yk = static_cast<long double>(values[k]) * g / static_cast<long double>(fip[k]);
        for (std::size_t l = 0; l < fip.size(); ++l) {
            if (fip[l] == 0) continue;
            const long double yl =
                static_cast<long double>(values[l]) * g / static_cast<long double>(fip[l]);
            quadratic += detail::sip_gap(sip.cells.at(k, l), fip[k], fip[l],
                                         design.resolution()) * yk * yl;
        }
    }

    const long double scale = std::max<long double>(
        1.0L, std::max(std::abs(definitional), std::abs(quadratic)));
    detail::ensure(std::abs(definitional - quadratic) <= 1e-9L * scale,
                   "design_variance: definitional and quadratic routes disagree");
    return static_cast<double>(definitional);
}

// Horvitz-Thompson variance estimator: double sum over sample pairs of
// (pi_kl - pi_k pi_l) / pi_kl * (y_k/pi_k)(y_l/pi_l), diagonal pi_kk = pi_k.
inline double variance_estimator_ht(const Sample& sample, std::span<const double> values,
                                    std::span<const Cell> fip, const SipMatrix& sip) {
    detail::check_units(values, fip);
    detail::require(sip.unit_count() == fip.size(), "variance estimator: sip size mismatch");
    const long double g = static_cast<long double>(sip.resolution);
    long double acc = 0.0L;
    for (std::uint32_t k : sample) {
        detail::require(k < fip.size(), "variance estimator: unit out of range");
        detail::require(fip[k] > 0, "variance estimator: zero inclusion probability in sample");
        const long double yk = static_cast<long double>(values[k]) * g / static_cast<long double>(fip[k]);
        for (std::uint32_t l : sample) {
            const Cell c_kl = sip.cells.at(k, l);
            detail::require(c_kl > 0, "variance estimator: zero joint probability in sample");
            const long double yl =
                static_cast<long double>(values[l]) * g / static_cast<long double>(fip[l]);
            const long double p_kl = static_cast<long double>(c_kl) / g;
            acc += detail::sip_gap(c_kl, fip[k], fip[l], sip.resolution) / p_kl * yk * yl;
        }
    }
    return static_cast<double>(acc);
}

// True when the SIP matrix satisfies the fixed-size row identity
// sum_{l != k} pi_kl = (n-1) pi_k exactly on the grid.
inline bool sip_is_fixed_size(const SipMatrix& sip, std::span<const Cell> fip) {
    detail::require(sip.unit_count() == fip.size(), "sip_is_fixed_size: size mismatch");
    unsigned __int128 fip_total = 0;
    for (Cell c : fip) fip_total += c;
    if (fip_total == 0 || fip_total % sip.resolution != 0) return false;
    const unsigned __int128 n = fip_total / sip.resolution;
    for (std::size_t k = 0; k < fip.size(); ++k) {
        unsigned __int128 row = 0;
        for (std::size_t l = 0; l < fip.size(); ++l)
            if (l != k) row += sip.cells.at(k, l);
        if (row != (n - 1) * static_cast<unsigned __int128>(fip[k])) return false;
    }
    return true;
}

// Sen-Yates-Grundy variance estimator for fixed-size designs:
// 1/2 * sum over distinct sample pairs of
// (pi_k pi_l - pi_kl) / pi_kl * (y_k/pi_k - y_l/pi_l)^2.
inline double variance_estimator_syg(const Sample& sample, std::span<const double> values,
                                     std::span<const Cell> fip, const SipMatrix& sip) {
    detail::check_units(values, fip);
    detail::require(sip.unit_count() == fip.size(), "variance estimator: sip size mismatch");
    detail::require(sip_is_fixed_size(sip, fip),
                    "variance_estimator_syg: design is not fixed-size");
    const long double g = static_cast<long double>(sip.resolution);
    long double acc = 0.0L;
    for (std::size_t a = 0; a < sample.size(); ++a) {
        const std::uint32_t k = sample[a];
        detail::require(k < fip.size(), "variance estimator: unit out of range");
        detail::require(fip[k] > 0, "variance estimator: zero inclusion probability in sample");
        const long double yk = static_cast<long double>(values[k]) * g / static_cast<long double>(fip[k]);
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            const std::uint32_t l = sample[b];
            const Cell c_kl = sip.cells.at(k, l);
            detail::require(c_kl > 0, "variance estimator: zero joint probability in sample");
            const long double yl =
                static_cast<long double>(values[l]) * g / static_cast<long double>(fip[l]);
            const long double p_kl = static_cast<long double>(c_kl) / g;
            const long double d = yk - yl;
            acc += -detail::sip_gap(c_kl, fip[k], fip[l], sip.resolution) / p_kl * d * d;
        }
    }
    return static_cast<double>(acc);
}

enum class Criterion { c1, c2, c3 };

inline const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::c1: return "c1";
        case Criterion::c2: return "c2";
        case Criterion::c3: return "c3";
    }
    throw domain_error("criterion_name: unknown criterion");
}

// Design criteria over the auxiliary total: C1 is the mean squared error
// (equal to the design variance of the z-total), C2 the mean absolute
// error, C3 the worst-case absolute error.
inline double criterion(const Design& design, std::span<const double> z,
                        std::span<const Cell> fip, Criterion which) {
    detail::check_units(z, fip);
    detail::require(design.unit_count() == fip.size(), "criterion: unit count mismatch");
    for (std::size_t k = 0; k < fip.size(); ++k)
        detail::require(fip[k] > 0 || z[k] == 0.0,
                        "criterion: zero inclusion probability with nonzero value");
    if (which == Criterion::c1) return design_variance(design, z, fip);

    const long double g = static_cast<long double>(design.resolution());
    long double total = 0.0L;
    for (std::size_t k = 0; k < fip.size(); ++k) total += z[k];
    long double mean_abs = 0.0L;
    long double max_abs = 0.0L;
    for (const auto& row : design.table()) {
        long double est = 0.0L;
        for (std::uint32_t k : row.sample)
            est += static_cast<long double>(z[k]) * g / static_cast<long double>(fip[k]);
        const long double dev = std::abs(est - total);
        mean_abs += static_cast<long double>(row.mass) / g * dev;
        max_abs = std::max(max_abs, dev);
    }
    return static_cast<double>(which == Criterion::c2 ? mean_abs : max_abs);
}

// Variance ratio baseline/candidate; > 1 means the candidate improves on
// the baseline. A perfect candidate against a fallible baseline reports
// infinity rather than dividing by zero.
inline double efficiency(double baseline_variance, double candidate_variance) {
    detail::require(baseline_variance >= 0.0 && candidate_variance >= 0.0,
                    "efficiency: variances must be nonnegative");
    if (candidate_variance == 0.0)
        return baseline_variance == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return baseline_variance / candidate_variance;
}

struct EstimateReport {
    double total_estimate = std::numeric_limits<double>::quiet_NaN();
    double variance = 0.0;
    double variance_estimate = std::numeric_limits<double>::quiet_NaN();
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

} // namespace gfs
