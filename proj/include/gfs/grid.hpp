#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "gfs/error.hpp"

namespace gfs {

// Cell index / cell count on the probability grid. A grid of resolution G
// divides [0,1] into G cells, so a probability is an exact count of cells.
using Cell = std::uint64_t;

inline constexpr Cell kDefaultResolution = 1'000'000'000;

// An exact probability: `cells` out of `resolution`. Never stores a float.
struct GridMass {
    Cell cells = 0;
    Cell resolution = 1;

    double value() const { return static_cast<double>(cells) / static_cast<double>(resolution); }

    friend bool operator==(const GridMass&, const GridMass&) = default;
};

// Sorted, pairwise disjoint, non-adjacent half-open intervals [a, b) on
// [0, G). One unit's bar. Structural equality is semantic equality because
// every mutation restores the canonical merged form.
class IntervalSet {
public:
    using Interval = std::pair<Cell, Cell>;

    explicit IntervalSet(Cell resolution) : resolution_(resolution) {
        detail::require(resolution > 0, "IntervalSet: resolution must be positive");
    }

    static IntervalSet single(Cell resolution, Cell lo, Cell hi) {
        IntervalSet s(resolution);
        s.insert_range(lo, hi);
        return s;
    }

    Cell resolution() const { return resolution_; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    GridMass measure() const {
        Cell total = 0;
        for (const auto& [a, b] : intervals_) total += b - a;
        return {total, resolution_};
    }

    bool contains(Cell point) const {
        detail::require(point < resolution_, "contains: point outside [0, G)");
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), point,
                                   [](Cell p, const Interval& iv) { return p < iv.first; });
        if (it == intervals_.begin()) return false;
        --it;
        return point < it->second;
    }

    // True iff [lo, hi) is entirely inside one interval.
    bool covers_range(Cell lo, Cell hi) const {
        check_range(lo, hi);
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), lo,
                                   [](Cell p, const Interval& iv) { return p < iv.first; });
        if (it == intervals_.begin()) return false;
        --it;
        return lo >= it->first && hi <= it->second;
    }

    // Removes [lo, hi), which must be fully covered; splits the host
    // interval as needed. An uncovered range signals an illegal move.
    void remove_range(Cell lo, Cell hi) {
        check_range(lo, hi);
        detail::require(covers_range(lo, hi), "remove_range: range not fully covered");
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), lo,
                                   [](Cell p, const Interval& iv) { return p < iv.first; });
        --it;
        const Cell a = it->first;
        const Cell b = it->second;
        if (a == lo && b == hi) {
            intervals_.erase(it);
        } else if (a == lo) {
            it->first = hi;
        } else if (b == hi) {
            it->second = lo;
        } else {
            it->second = lo;
            intervals_.insert(std::next(it), Interval{hi, b});
        }
    }

    // Inserts [lo, hi), which must not overlap anything present; merges
    // with adjacent neighbours to restore canonical form.
    void insert_range(Cell lo, Cell hi) {
        check_range(lo, hi);
        auto it = std::lower_bound(intervals_.begin(), intervals_.end(), lo,
                                   [](const Interval& iv, Cell p) { return iv.first < p; });
        // `it` is the first interval starting at or after lo.
        detail::require(it == intervals_.end() || hi <= it->first,
                        "insert_range: overlaps existing interval");
        detail::require(it == intervals_.begin() || std::prev(it)->second <= lo,
                        "insert_range: overlaps existing interval");

        const bool merge_left = it != intervals_.begin() && std::prev(it)->second == lo;
        const bool merge_right = it != intervals_.end() && it->first == hi;
        if (merge_left && merge_right) {
            std::prev(it)->second = it->second;
            intervals_.erase(it);
        } else if (merge_left) {
            std::prev(it)->second = hi;
        } else if (merge_right) {
            it->first = lo;
        } else {
            intervals_.insert(it, Interval{lo, hi});
        }
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    void check_range(Cell lo, Cell hi) const {
        detail::require(lo < hi, "range: lo must be < hi");
        detail::require(hi <= resolution_, "range: hi outside [0, G]");
    }

    Cell resolution_;
    std::vector<Interval> intervals_;
};

// Exact measure of a ∩ b by a two-pointer sweep.
inline GridMass intersection_measure(const IntervalSet& a, const IntervalSet& b) {
    detail::require(a.resolution() == b.resolution(),
                    "intersection_measure: grid resolution mismatch");
    Cell total = 0;
    auto ia = a.intervals().begin();
    auto ib = b.intervals().begin();
    while (ia != a.intervals().end() && ib != b.intervals().end()) {
        const Cell lo = std::max(ia->first, ib->first);
        const Cell hi = std::min(ia->second, ib->second);
        if (lo < hi) total += hi - lo;
        if (ia->second < ib->second) ++ia; else ++ib;
    }
    return {total, a.resolution()};
}

} // namespace gfs
