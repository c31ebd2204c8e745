#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gfs/grid.hpp"
#include "gfs/rng.hpp"

namespace gfs {

// The geometric object every algorithm works on: one bar (interval set) per
// unit, all on the same grid, with the target inclusion probability per unit.
// Invariant: measure(bars[k]) == fip[k] for every k.
struct BarLayout {
    Cell resolution = kDefaultResolution;
    std::vector<Cell> fip;        // target cells per unit
    std::vector<IntervalSet> bars;

    std::size_t unit_count() const { return fip.size(); }

    void validate() const {
        detail::ensure(bars.size() == fip.size(), "BarLayout: fip/bars size mismatch");
        for (std::size_t k = 0; k < bars.size(); ++k) {
            detail::ensure(bars[k].resolution() == resolution,
                           "BarLayout: bar resolution mismatch at unit " + std::to_string(k));
            detail::ensure(bars[k].measure().cells == fip[k],
                           "BarLayout: bar measure != fip at unit " + std::to_string(k));
        }
    }
};

// Per-unit study data: y is the main variable, x the design auxiliary used
// to build inclusion probabilities, z the evaluation auxiliary. y and z may
// be absent (empty).
struct Population {
    std::size_t size = 0;
    std::vector<double> y;
    std::vector<double> x;
    std::vector<double> z;

    void validate() const {
        auto ok = [&](const std::vector<double>& v) { return v.empty() || v.size() == size; };
        detail::require(ok(y) && ok(x) && ok(z), "Population: column length != N");
    }
};

struct FipSolution {
    std::vector<Cell> cells;       // per-unit probability, sums to n * G exactly
    double max_residual = 0.0;     // largest |cells/G - exact pi| introduced by rounding
};

// PPS inclusion probabilities pi_k = min(c * x_k, 1) with sum(pi) = n.
// Saturated units are pinned at 1 and c recomputed over the remainder until
// stable; the result is put on the grid by largest-remainder rounding so the
// total is exactly n * G cells.
inline FipSolution fip_from_aux(std::span<const double> x, std::size_t n, Cell resolution) {
    const std::size_t N = x.size();
    detail::require(n >= 1, "fip_from_aux: n must be >= 1");
    detail::require(n <= N, "fip_from_aux: n exceeds population size");
    std::size_t positive = 0;
    for (double v : x) {
        detail::require(std::isfinite(v) && v >= 0.0, "fip_from_aux: x values must be finite and >= 0");
        if (v > 0.0) ++positive;
    }
    detail::require(positive >= n, "fip_from_aux: fewer than n positive x values");

    std::vector<bool> saturated(N, false);
    std::size_t n_sat = 0;
    for (;;) {
        if (n_sat == n) break;
        double free_sum = 0.0;
        for (std::size_t k = 0; k < N; ++k)
            if (!saturated[k]) free_sum += x[k];
        detail::ensure(free_sum > 0.0, "fip_from_aux: saturation exhausted support");
        const double c = static_cast<double>(n - n_sat) / free_sum;
        bool grew = false;
        for (std::size_t k = 0; k < N; ++k) {
            if (!saturated[k] && c * x[k] >= 1.0) {
                saturated[k] = true;
                ++n_sat;
                grew = true;
            }
        }
        if (!grew) break;
    }

    double free_sum = 0.0;
    for (std::size_t k = 0; k < N; ++k)
        if (!saturated[k]) free_sum += x[k];
    const double c = n_sat < n ? static_cast<double>(n - n_sat) / free_sum : 0.0;

    std::vector<double> exact(N);
    for (std::size_t k = 0; k < N; ++k)
        exact[k] = saturated[k] ? 1.0 : c * x[k];

    // Largest-remainder rounding; ties broken toward lower index. The
    // floating sum of exact[k]*G can drift a few cells off n*G, so the
    // correction walks the remainder order until the total is exact.
    const double g = static_cast<double>(resolution);
    std::vector<Cell> cells(N);
    std::vector<std::pair<double, std::size_t>> rem;
    rem.reserve(N);
    Cell assigned = 0;
    for (std::size_t k = 0; k < N; ++k) {
        const double t = exact[k] * g;
        const double fl = std::floor(t);
        cells[k] = static_cast<Cell>(fl);
        assigned += cells[k];
        rem.emplace_back(t - fl, k);
    }
    const Cell target = static_cast<Cell>(n) * resolution;
    std::stable_sort(rem.begin(), rem.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t i = 0;
    while (assigned < target) {
        const std::size_t k = rem[i % N].second;
        if (cells[k] < resolution) {
            ++cells[k];
            ++assigned;
        }
        ++i;
    }
    i = 0;
    while (assigned > target) {
        const std::size_t k = rem[N - 1 - (i % N)].second;
        if (cells[k] > 0) {
            --cells[k];
            --assigned;
        }
        ++i;
    }

    FipSolution out;
    out.cells = std::move(cells);
    for (std::size_t k = 0; k < N; ++k) {
        const double r = std::abs(static_cast<double>(out.cells[k]) / g - exact[k]);
        out.max_residual = std::max(out.max_residual, r);
    }
    return out;
}

// One contiguous bar per unit at an explicit offset; the constructor used
// by golden tests and worked examples.
inline BarLayout layout_from_offsets(std::span<const Cell> fip, Cell resolution,
                                     std::span<const Cell> offsets) {
    detail::require(fip.size() == offsets.size(), "layout_from_offsets: fip/offset size mismatch");
    BarLayout layout;
    layout.resolution = resolution;
    layout.fip.assign(fip.begin(), fip.end());
    layout.bars.reserve(fip.size());
    for (std::size_t k = 0; k < fip.size(); ++k) {
        detail::require(fip[k] <= resolution, "layout_from_offsets: fip exceeds grid");
        detail::require(offsets[k] + fip[k] <= resolution,
                        "layout_from_offsets: bar sticks out of [0, G)");
        IntervalSet bar(resolution);
        if (fip[k] > 0) bar.insert_range(offsets[k], offsets[k] + fip[k]);
        layout.bars.push_back(std::move(bar));
    }
    layout.validate();
    return layout;
}

// Each unit gets one contiguous bar at a uniformly random admissible offset.
inline BarLayout random_layout(std::span<const Cell> fip, Cell resolution, Rng& rng) {
    std::vector<Cell> offsets(fip.size(), 0);
    for (std::size_t k = 0; k < fip.size(); ++k) {
        detail::require(fip[k] <= resolution, "random_layout: fip exceeds grid");
        offsets[k] = rng.uniform_inclusive(0, resolution - fip[k]);
    }
    return layout_from_offsets(fip, resolution, offsets);
}

// Cumulative placement with wrap-around at 1. When sum(fip) is an integer
// multiple of G, every cell is covered by exactly n bars, so the design has
// fixed size n. Equivalent to systematic unequal-probability sampling.
inline BarLayout madow_layout(std::span<const Cell> fip, Cell resolution) {
    BarLayout layout;
    layout.resolution = resolution;
    layout.fip.assign(fip.begin(), fip.end());
    layout.bars.reserve(fip.size());
    Cell start = 0;
    for (std::size_t k = 0; k < fip.size(); ++k) {
        detail::require(fip[k] <= resolution, "madow_layout: fip exceeds grid");
        IntervalSet bar(resolution);
        const Cell len = fip[k];
        if (len > 0) {
            if (start + len <= resolution) {
                bar.insert_range(start, start + len);
                start = (start + len) % resolution;
            } else {
                bar.insert_range(start, resolution);
                const Cell wrapped = start + len - resolution;
                bar.insert_range(0, wrapped);
                start = wrapped;
            }
        }
        layout.bars.push_back(std::move(bar));
    }
    layout.validate();
    return layout;
}

} // namespace gfs
