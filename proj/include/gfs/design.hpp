#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gfs/layout.hpp"

namespace gfs {

// A sample is a canonically sorted list of 0-based unit indices.
using Sample = std::vector<std::uint32_t>;

// Sorted-set helpers for samples.
namespace sample_ops {

inline bool contains(const Sample& s, std::uint32_t k) {
    return std::binary_search(s.begin(), s.end(), k);
}

inline Sample difference(const Sample& a, const Sample& b) {
    Sample out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline void insert(Sample& s, std::uint32_t k) {
    s.insert(std::lower_bound(s.begin(), s.end(), k), k);
}

inline void erase(Sample& s, std::uint32_t k) {
    auto it = std::lower_bound(s.begin(), s.end(), k);
    detail::ensure(it != s.end() && *it == k, "sample_ops::erase: unit not present");
    s.erase(it);
}

} // namespace sample_ops

// Maximal (elementary) vertical strip [lo, hi) over which the selected
// sample is constant: every bar either fully covers it or misses it.
struct Strip {
    Cell lo = 0;
    Cell hi = 0;
    Sample sample;

    Cell height() const { return hi - lo; }
};

template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    SquareMatrix(std::size_t n, T fill = T{}) : n_(n), v_(n * n, fill) {}

    std::size_t size() const { return n_; }
    T& at(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<T> v_;
};

// Second-order inclusion probabilities in cells; symmetric, diagonal = fip.
struct SipMatrix {
    Cell resolution = 1;
    SquareMatrix<Cell> cells;

    std::size_t unit_count() const { return cells.size(); }
    double value(std::size_t k, std::size_t l) const {
        return static_cast<double>(cells.at(k, l)) / static_cast<double>(resolution);
    }
};

// The probability law over samples: mass per distinct sample, masses summing
// to exactly G. Canonically ordered (lexicographic by sample).
class Design {
public:
    struct Row {
        Sample sample;
        Cell mass = 0;
    };

    Design(Cell resolution, std::size_t n_units, std::vector<Row> table)
        : resolution_(resolution), n_units_(n_units), table_(std::move(table)) {
        std::sort(table_.begin(), table_.end(),
                  [](const Row& a, const Row& b) { return a.sample < b.sample; });
        Cell total = 0;
        for (const auto& [s, m] : table_) {
            detail::require(m > 0, "Design: zero-mass row");
            detail::require(std::is_sorted(s.begin(), s.end()) &&
                                std::adjacent_find(s.begin(), s.end()) == s.end(),
                            "Design: sample not a sorted set");
            detail::require(s.empty() || s.back() < n_units_, "Design: unit id out of range");
            total += m;
        }
        detail::require(total == resolution_, "Design: masses must sum to the grid resolution");
        for (std::size_t t = 1; t < table_.size(); ++t)
            detail::require(table_[t - 1].sample != table_[t].sample,
                            "Design: duplicate sample row");
    }

    Cell resolution() const { return resolution_; }
    std::size_t unit_count() const { return n_units_; }
    const std::vector<Row>& table() const { return table_; }
    std::size_t sample_count() const { return table_.size(); }

private:
    Cell resolution_;
    std::size_t n_units_;
    std::vector<Row> table_;
};

// Ordered, contiguous, exhaustive partition of [0, G) into elementary strips,
// breaking at every bar endpoint. Adjacent strips with equal samples are kept
// distinct; aggregate() merges them.
inline std::vector<Strip> strips(const BarLayout& layout) {
    std::vector<Cell> cuts;
    cuts.push_back(0);
    cuts.push_back(layout.resolution);
    for (const auto& bar : layout.bars) {
        for (const auto& [a, b] : bar.intervals()) {
            cuts.push_back(a);
            cuts.push_back(b);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.back() > layout.resolution)
        throw invariant_error("strips: interval beyond grid");

    // Sweep: unit k becomes active at each interval start, inactive at each end.
    struct Event { Cell pos; std::uint32_t unit; bool start; };
    std::vector<Event> events;
    for (std::uint32_t k = 0; k < layout.bars.size(); ++k) {
        for (const auto& [a, b] : layout.bars[k].intervals()) {
            events.push_back({a, k, true});
            events.push_back({b, k, false});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& e1, const Event& e2) {
        if (e1.pos != e2.pos) return e1.pos < e2.pos;
        return e1.start < e2.start; // ends first
    });

    std::vector<Strip> out;
    out.reserve(cuts.size() - 1);
    Sample active;
    std::size_t e = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Cell lo = cuts[i];
        while (e < events.size() && events[e].pos == lo) {
            if (events[e].start) sample_ops::insert(active, events[e].unit);
            else sample_ops::erase(active, events[e].unit);
            ++e;
        }
        out.push_back(Strip{lo, cuts[i + 1], active});
    }
    return out;
}

inline Design aggregate(std::span<const Strip> parts, Cell resolution, std::size_t n_units) {
    struct SampleHash {
        std::size_t operator()(const Sample& s) const {
            std::size_t h = 0xcbf29ce484222325ULL;
            for (std::uint32_t k : s) h = (h ^ (k + 1)) * 0x100000001b3ULL;
            return h;
        }
    };
    std::unordered_map<Sample, Cell, SampleHash> acc;
    for (const Strip& st : parts) acc[st.sample] += st.height();
    std::vector<Design::Row> table;
    table.reserve(acc.size());
    for (auto& [s, m] : acc) table.push_back(Design::Row{s, m});
    return Design(resolution, n_units, std::move(table));
}

inline Design aggregate(const BarLayout& layout) {
    const auto parts = strips(layout);
    return aggregate(parts, layout.resolution, layout.unit_count());
}

// First-order inclusion probabilities recovered from the design table.
inline std::vector<Cell> first_order(const Design& design) {
    detail::require(design.sample_count() > 0, "first_order: empty design table");
    std::vector<Cell> fip(design.unit_count(), 0);
    for (const auto& [s, m] : design.table())
        for (std::uint32_t k : s) fip[k] += m;
    return fip;
}

// SIP by pairwise bar intersection; diagonal is the FIP.
inline SipMatrix second_order(const BarLayout& layout) {
    const std::size_t N = layout.unit_count();
    SipMatrix sip;
    sip.resolution = layout.resolution;
    sip.cells = SquareMatrix<Cell>(N, 0);
    for (std::size_t k = 0; k < N; ++k) {
        sip.cells.at(k, k) = layout.bars[k].measure().cells;
        for (std::size_t l = k + 1; l < N; ++l) {
            const Cell m = intersection_measure(layout.bars[k], layout.bars[l]).cells;
            sip.cells.at(k, l) = m;
            sip.cells.at(l, k) = m;
        }
    }
    return sip;
}

// SIP accumulated from an enumerated design table.
inline SipMatrix sip_from_design(const Design& design) {
    const std::size_t N = design.unit_count();
    SipMatrix sip;
    sip.resolution = design.resolution();
    sip.cells = SquareMatrix<Cell>(N, 0);
    for (const auto& [s, m] : design.table())
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i; j < s.size(); ++j) {
                sip.cells.at(s[i], s[j]) += m;
                if (i != j) sip.cells.at(s[j], s[i]) += m;
            }
    return sip;
}

inline double entropy(const Design& design) {
    const double g = static_cast<double>(design.resolution());
    double h = 0.0;
    for (const auto& [s, m] : design.table()) {
        const double p = static_cast<double>(m) / g;
        h -= p * std::log(p);
    }
    return h < 0.0 ? 0.0 : h;
}

// Sum over samples of |s| * mass; equals sum(fip) exactly for any layout.
inline Cell expected_size_cells(const Design& design) {
    Cell total = 0;
    for (const auto& [s, m] : design.table()) total += static_cast<Cell>(s.size()) * m;
    return total;
}

inline double expected_size(const Design& design) {
    return static_cast<double>(expected_size_cells(design)) /
           static_cast<double>(design.resolution());
}

inline double size_variance(const Design& design) {
    const double g = static_cast<double>(design.resolution());
    const double mean = expected_size(design);
    double v = 0.0;
    for (const auto& [s, m] : design.table()) {
        const double d = static_cast<double>(s.size()) - mean;
        v += d * d * (static_cast<double>(m) / g);
    }
    return v;
}

// The random-line draw at an explicit cell; the sample is every unit whose
// bar contains r.
inline Sample sample_at(const BarLayout& layout, Cell r) {
    detail::require(r < layout.resolution, "sample_at: r outside [0, G)");
    Sample s;
    for (std::uint32_t k = 0; k < layout.bars.size(); ++k)
        if (!layout.bars[k].empty() && layout.bars[k].contains(r)) s.push_back(k);
    return s;
}

inline Sample draw_sample(const BarLayout& layout, Rng& rng) {
    return sample_at(layout, rng.below(layout.resolution));
}

} // namespace gfs
