#pragma once

#include <cstdio>
#include <string>

#include "gfs/layout.hpp"

namespace gfs {

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

// Bar chart of a layout: the vertical axis is [0, 1], one slot per unit,
// one rectangle per interval. Output is deterministic byte-for-byte.
inline std::string render_svg(const BarLayout& layout) {
    layout.validate();
    const std::size_t n = layout.unit_count();
    const double slot = 56.0;
    const double left = 64.0, top = 24.0, plot_h = 400.0, bottom_pad = 44.0;
    const double plot_w = slot * static_cast<double>(n == 0 ? 1 : n);
    const double width = left + plot_w + 24.0;
    const double height = top + plot_h + bottom_pad;
    const double g = static_cast<double>(layout.resolution);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(width) +
           "\" height=\"" + detail::fmt2(height) + "\" viewBox=\"0 0 " + detail::fmt2(width) +
           " " + detail::fmt2(height) + "\">\n";
    svg += "  <g font-family=\"sans-serif\" font-size=\"13\">\n";

    for (int t = 0; t <= 4; ++t) {
        const double frac = 0.25 * t;
        const double y = top + plot_h * (1.0 - frac);
        svg += "    <line x1=\"" + detail::fmt2(left - 6.0) + "\" y1=\"" + detail::fmt2(y) +
               "\" x2=\"" + detail::fmt2(left) + "\" y2=\"" + detail::fmt2(y) +
               "\" stroke=\"black\"/>\n";
        svg += "    <text x=\"" + detail::fmt2(left - 10.0) + "\" y=\"" + detail::fmt2(y + 4.0) +
               "\" text-anchor=\"end\">" + detail::fmt2(frac) + "</text>\n";
    }
    svg += "    <line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top) + "\" x2=\"" +
           detail::fmt2(left) + "\" y2=\"" + detail::fmt2(top + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "    <line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top + plot_h) +
           "\" x2=\"" + detail::fmt2(left + plot_w) + "\" y2=\"" + detail::fmt2(top + plot_h) +
           "\" stroke=\"black\"/>\n";

    for (std::size_t k = 0; k < n; ++k) {
        const double x0 = left + slot * static_cast<double>(k) + 0.2 * slot;
        for (const auto& [lo, hi] : layout.bars[k].intervals()) {
            const double y_hi = top + plot_h * (1.0 - static_cast<double>(hi) / g);
            const double h = plot_h * static_cast<double>(hi - lo) / g;
            svg += "    <rect x=\"" + detail::fmt2(x0) + "\" y=\"" + detail::fmt2(y_hi) +
                   "\" width=\"" + detail::fmt2(0.6 * slot) + "\" height=\"" + detail::fmt2(h) +
                   "\" fill=\"#4878a8\" stroke=\"black\"/>\n";
        }
        svg += "    <text x=\"" + detail::fmt2(left + slot * (static_cast<double>(k) + 0.5)) +
               "\" y=\"" + detail::fmt2(top + plot_h + 20.0) + "\" text-anchor=\"middle\">" +
               std::to_string(k + 1) + "</text>\n";
    }

    svg += "  </g>\n</svg>\n";
    return svg;
}

} // namespace gfs
