#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gfs/design.hpp"

namespace gfs {

enum class MoveMode { free_size, fixed_size };

struct MoveParams {
    double alpha = 1.0;            // substrip fraction, in (0, 1]
    std::uint64_t iterations = 0;  // M
    std::uint64_t seed = 0;
    bool random_anchor = false;    // substrip placed at a random offset instead of the strip bottom
    bool mass_weighted = false;    // strip selection proportional to height instead of uniform
};

// Owns a layout plus a strip partition kept in sync across moves. The
// partition starts as the elementary sweep (or any supplied refinement of
// it) and is updated locally: a move splits the two touched strips at its
// window edges and re-merges flush neighbors whose samples became equal.
// Cuts can only die at window edges, so local merging keeps an elementary
// start exactly equal to a fresh sweep of the layout; without it slivers
// accumulate, substrip sizes decay to zero, and the chain quenches long
// before the design mixes. Aggregating the maintained partition always
// gives the same design as a fresh sweep.
class ChaoticEngine {
public:
    explicit ChaoticEngine(BarLayout layout)
        : layout_(std::move(layout)), strips_(gfs::strips(layout_)) {
        layout_.validate();
    }

    // Test hook: start from an explicit refinement of the elementary partition.
    ChaoticEngine(BarLayout layout, std::vector<Strip> refinement)
        : layout_(std::move(layout)), strips_(std::move(refinement)) {
        layout_.validate();
        std::sort(strips_.begin(), strips_.end(),
                  [](const Strip& a, const Strip& b) { return a.lo < b.lo; });
        validate_refinement();
    }

    const BarLayout& layout() const { return layout_; }
    const std::vector<Strip>& strips() const { return strips_; }
    BarLayout take_layout() && { return std::move(layout_); }

    Design design() const {
        return aggregate(strips_, layout_.resolution, layout_.unit_count());
    }

    // One free-size move: pick strips i != j, substrip size
    // v = floor(alpha * min(height_i, height_j)), move one unit of
    // s_i \ s_j from strip i to strip j. The unit is drawn uniformly over
    // all bars and the move is skipped unless it lies in s_i \ s_j, so an
    // applied move and its reverse are equally likely; conditioned on
    // application the unit is still uniform over the difference. Returns
    // false for the no-op outcomes. Draw order: i, j, [anchors,] k.
    bool free_move(Rng& rng, double alpha, bool random_anchor = false,
                   bool mass_weighted = false) {
        detail::require(alpha > 0.0 && alpha <= 1.0, "free_move: alpha outside (0, 1]");
        detail::require(strips_.size() >= 2, "free_move: need at least two strips");
        const auto [i, j] = pick_strip_pair(rng, mass_weighted);
        const Cell v = substrip_cells(alpha, i, j);
        if (v == 0) return false;
        const Cell off_i = pick_anchor(rng, i, v, random_anchor);
        const Cell off_j = pick_anchor(rng, j, v, random_anchor);
        const auto k = static_cast<std::uint32_t>(rng.below(layout_.unit_count()));
        if (!sample_ops::contains(strips_[i].sample, k) ||
            sample_ops::contains(strips_[j].sample, k))
            return false;
        interchange(i, j, k, v, off_i, off_j);
        return true;
    }

    // One fixed-size move: as free_move but both difference sets must be
    // nonempty; unit k moves i -> j and unit l moves j -> i, so every
    // strip keeps its sample size. Draw order: i, j, [anchors,] k, l.
    bool fixed_move(Rng& rng, double alpha, bool random_anchor = false,
                    bool mass_weighted = false) {
        detail::require(alpha > 0.0 && alpha <= 1.0, "fixed_move: alpha outside (0, 1]");
        detail::require(strips_.size() >= 2, "fixed_move: need at least two strips");
        const auto [i, j] = pick_strip_pair(rng, mass_weighted);
        const Cell v = substrip_cells(alpha, i, j);
        if (v == 0) return false;
        const Cell off_i = pick_anchor(rng, i, v, random_anchor);
        const Cell off_j = pick_anchor(rng, j, v, random_anchor);
        const Sample diff_ij = sample_ops::difference(strips_[i].sample, strips_[j].sample);
        const Sample diff_ji = sample_ops::difference(strips_[j].sample, strips_[i].sample);
        if (diff_ij.empty() || diff_ji.empty()) return false;
        const std::uint32_t k = diff_ij[rng.below(diff_ij.size())];
        const std::uint32_t l = diff_ji[rng.below(diff_ji.size())];
        interchange_swap(i, j, k, l, v, off_i, off_j);
        return true;
    }

    // Deterministic kernel: move unit k's segment of size v from the
    // substrip at offset off_i inside strip i to offset off_j inside
    // strip j. Exposed for targeted tests and worked examples.
    void interchange(std::size_t i, std::size_t j, std::uint32_t k, Cell v,
                     std::optional<Cell> off_i = std::nullopt,
                     std::optional<Cell> off_j = std::nullopt) {
        check_move_args(i, j, v, off_i.value_or(0), off_j.value_or(0));
        detail::require(sample_ops::contains(strips_[i].sample, k) &&
                            !sample_ops::contains(strips_[j].sample, k),
                        "interchange: unit must be in strip i only");
        const Cell src = strips_[i].lo + off_i.value_or(0);
        const Cell dst = strips_[j].lo + off_j.value_or(0);
        Sample moved_i = strips_[i].sample;
        sample_ops::erase(moved_i, k);
        Sample moved_j = strips_[j].sample;
        sample_ops::insert(moved_j, k);
        move_bar_segment(k, src, dst, v);
        apply_window(src, src + v, std::move(moved_i));
        apply_window(dst, dst + v, std::move(moved_j));
    }

    // Deterministic kernel for the fixed-size swap (k: i -> j, l: j -> i).
    void interchange_swap(std::size_t i, std::size_t j, std::uint32_t k, std::uint32_t l,
                          Cell v, std::optional<Cell> off_i = std::nullopt,
                          std::optional<Cell> off_j = std::nullopt) {
        check_move_args(i, j, v, off_i.value_or(0), off_j.value_or(0));
        detail::require(sample_ops::contains(strips_[i].sample, k) &&
                            !sample_ops::contains(strips_[j].sample, k),
                        "interchange_swap: k must be in strip i only");
        detail::require(sample_ops::contains(strips_[j].sample, l) &&
                            !sample_ops::contains(strips_[i].sample, l),
                        "interchange_swap: l must be in strip j only");
        const Cell src = strips_[i].lo + off_i.value_or(0);
        const Cell dst = strips_[j].lo + off_j.value_or(0);
        Sample moved_i = strips_[i].sample;
        sample_ops::erase(moved_i, k);
        sample_ops::insert(moved_i, l);
        Sample moved_j = strips_[j].sample;
        sample_ops::erase(moved_j, l);
        sample_ops::insert(moved_j, k);
        move_bar_segment(k, src, dst, v);
        move_bar_segment(l, dst, src, v);
        apply_window(src, src + v, std::move(moved_i));
        apply_window(dst, dst + v, std::move(moved_j));
    }

private:
    std::pair<std::size_t, std::size_t> pick_strip_pair(Rng& rng, bool mass_weighted) {
        if (!mass_weighted) {
            const std::size_t i = rng.below(strips_.size());
            std::size_t j = rng.below(strips_.size() - 1);
            if (j >= i) ++j;
            return {i, j};
        }
        const std::size_t i = pick_mass_weighted(rng);
        std::size_t j = pick_mass_weighted(rng);
        while (j == i) j = pick_mass_weighted(rng);
        return {i, j};
    }

    std::size_t pick_mass_weighted(Rng& rng) {
        Cell r = rng.below(layout_.resolution);
        for (std::size_t idx = 0; idx < strips_.size(); ++idx) {
            const Cell h = strips_[idx].height();
            if (r < h) return idx;
            r -= h;
        }
        throw invariant_error("pick_mass_weighted: strip heights do not cover the grid");
    }

    Cell substrip_cells(double alpha, std::size_t i, std::size_t j) const {
        const Cell m = std::min(strips_[i].height(), strips_[j].height());
        return static_cast<Cell>(alpha * static_cast<double>(m));
    }

    Cell pick_anchor(Rng& rng, std::size_t idx, Cell v, bool random_anchor) {
        if (!random_anchor) return 0;
        return rng.uniform_inclusive(0, strips_[idx].height() - v);
    }

    void check_move_args(std::size_t i, std::size_t j, Cell v, Cell off_i, Cell off_j) const {
        detail::require(i < strips_.size() && j < strips_.size() && i != j,
                        "interchange: bad strip indices");
        detail::require(v >= 1 && v <= strips_[i].height() && v <= strips_[j].height(),
                        "interchange: substrip size out of range");
        detail::require(off_i + v <= strips_[i].height() && off_j + v <= strips_[j].height(),
                        "interchange: substrip offset out of range");
    }

    void move_bar_segment(std::uint32_t k, Cell src, Cell dst, Cell v) {
        detail::require(k < layout_.bars.size(), "interchange: unit out of range");
        detail::ensure(layout_.bars[k].covers_range(src, src + v),
                       "chaotic: strip bookkeeping out of sync (source not covered)");
        layout_.bars[k].remove_range(src, src + v);
        layout_.bars[k].insert_range(dst, dst + v);
    }

    // Index of the record containing position p; strips_ stays sorted by lo.
    std::size_t host_index(Cell p) const {
        const auto it = std::upper_bound(
            strips_.begin(), strips_.end(), p,
            [](Cell pos, const Strip& s) { return pos < s.lo; });
        detail::require(it != strips_.begin(), "apply_window: position outside partition");
        return static_cast<std::size_t>(it - strips_.begin()) - 1;
    }

    // Rewrite [w_lo, w_hi), which lies inside a single record, to carry
    // `sample`. The host is split at the window edges; where the window is
    // flush with a record boundary and the neighbor ends up with the same
    // sample, the records merge, so dead cuts never linger.
    void apply_window(Cell w_lo, Cell w_hi, Sample sample) {
        const std::size_t idx = host_index(w_lo);
        const Strip host = strips_[idx];
        detail::require(host.lo <= w_lo && w_hi <= host.hi, "apply_window: window spans strips");
        if (host.sample == sample) return;

        std::size_t first = idx;        // replaced records: [first, last)
        std::size_t last = idx + 1;
        Cell merged_lo = w_lo;
        Cell merged_hi = w_hi;
        if (w_lo == host.lo && idx > 0 && strips_[idx - 1].sample == sample) {
            merged_lo = strips_[idx - 1].lo;
            --first;
        }
        if (w_hi == host.hi && idx + 1 < strips_.size() && strips_[idx + 1].sample == sample) {
            merged_hi = strips_[idx + 1].hi;
            ++last;
        }

        std::vector<Strip> repl;
        repl.reserve(3);
        if (host.lo < w_lo) repl.push_back(Strip{host.lo, w_lo, host.sample});
        repl.push_back(Strip{merged_lo, merged_hi, std::move(sample)});
        if (w_hi < host.hi) repl.push_back(Strip{w_hi, host.hi, host.sample});

        const auto base = strips_.begin() + static_cast<std::ptrdiff_t>(first);
        strips_.erase(base, strips_.begin() + static_cast<std::ptrdiff_t>(last));
        strips_.insert(strips_.begin() + static_cast<std::ptrdiff_t>(first),
                       std::make_move_iterator(repl.begin()),
                       std::make_move_iterator(repl.end()));
    }

    void validate_refinement() const {
        std::vector<Strip> sorted = strips_;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Strip& a, const Strip& b) { return a.lo < b.lo; });
        Cell cursor = 0;
        for (const Strip& st : sorted) {
            detail::require(st.lo == cursor && st.hi > st.lo,
                            "ChaoticEngine: refinement is not a partition of [0, G)");
            cursor = st.hi;
            for (std::uint32_t k = 0; k < layout_.bars.size(); ++k) {
                const bool member = sample_ops::contains(st.sample, k);
                const bool covers = layout_.bars[k].covers_range(st.lo, st.hi);
                detail::require(member == covers,
                                "ChaoticEngine: refinement sample disagrees with bars");
            }
        }
        detail::require(cursor == layout_.resolution,
                        "ChaoticEngine: refinement does not reach G");
    }

    BarLayout layout_;
    std::vector<Strip> strips_;
};

struct TraceRow {
    std::uint64_t move_index = 0;  // moves attempted so far
    std::uint64_t applied = 0;     // cumulative applied
    std::uint64_t skipped = 0;     // cumulative no-ops
    double entropy = 0.0;
    std::size_t strip_count = 0;
    std::optional<double> max_sip_gap;    // free mode: max |pi_kl - pi_k pi_l|
    std::optional<double> tv_to_oracle;   // when a reference diagnostic is supplied
};

struct ChaoticResult {
    BarLayout layout;
    std::vector<TraceRow> trace;
    std::uint64_t applied = 0;
    std::uint64_t skipped = 0;
};

namespace detail {

inline double max_sip_gap(const BarLayout& layout) {
    const SipMatrix sip = second_order(layout);
    const double g = static_cast<double>(layout.resolution);
    double worst = 0.0;
    for (std::size_t k = 0; k < layout.unit_count(); ++k) {
        const double pk = static_cast<double>(layout.fip[k]) / g;
        for (std::size_t l = k + 1; l < layout.unit_count(); ++l) {
            const double pl = static_cast<double>(layout.fip[l]) / g;
            worst = std::max(worst, std::abs(sip.value(k, l) - pk * pl));
        }
    }
    return worst;
}

} // namespace detail

// Applies M moves of the given kind, recording diagnostics at evenly spaced
// checkpoints (plus the initial state). `reference_tv`, when supplied, is
// evaluated on the aggregated design at each checkpoint.
inline ChaoticResult run_chaotic(const BarLayout& start, const MoveParams& params, MoveMode mode,
                                 std::size_t checkpoints = 100,
                                 const std::function<double(const Design&)>& reference_tv = {}) {
    ChaoticEngine engine(start);
    Rng rng(params.seed);
    ChaoticResult result;

    const auto snapshot = [&](std::uint64_t move_index) {
        TraceRow row;
        row.move_index = move_index;
        row.applied = result.applied;
        row.skipped = result.skipped;
        const Design d = engine.design();
        row.entropy = entropy(d);
        row.strip_count = engine.strips().size();
        if (mode == MoveMode::free_size) row.max_sip_gap = detail::max_sip_gap(engine.layout());
        if (reference_tv) row.tv_to_oracle = reference_tv(d);
        result.trace.push_back(row);
    };

    snapshot(0);
    const std::uint64_t M = params.iterations;
    std::uint64_t next_checkpoint =
        checkpoints > 0 && M > 0 ? (M + checkpoints - 1) / checkpoints : M + 1;
    for (std::uint64_t m = 1; m <= M; ++m) {
        bool applied = false;
        if (engine.strips().size() >= 2) {
            applied = mode == MoveMode::free_size
                          ? engine.free_move(rng, params.alpha, params.random_anchor,
                                             params.mass_weighted)
                          : engine.fixed_move(rng, params.alpha, params.random_anchor,
                                              params.mass_weighted);
        }
        if (applied) ++result.applied; else ++result.skipped;
        if (m == next_checkpoint || m == M) {
            snapshot(m);
            const std::uint64_t step = checkpoints > 0 ? (M + checkpoints - 1) / checkpoints : M;
            next_checkpoint = std::min(M, next_checkpoint + std::max<std::uint64_t>(step, 1));
            if (next_checkpoint <= m) next_checkpoint = m + 1;
        }
    }
    result.layout = std::move(engine).take_layout();
    result.layout.validate();
    return result;
}

} // namespace gfs
