#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "gfs/chaotic.hpp"
#include "gfs/design.hpp"
#include "gfs/layout.hpp"

using gfs::BarLayout;
using gfs::Cell;
using gfs::ChaoticEngine;
using gfs::Design;
using gfs::MoveMode;
using gfs::MoveParams;
using gfs::Sample;
using gfs::Strip;

namespace {

std::vector<Cell> example_fip(Cell resolution) {
    std::vector<Cell> f;
    for (const Cell pct : {38, 30, 42, 65, 25, 10, 90})
        f.push_back(pct * resolution / 100);
    return f;
}

std::vector<Cell> wide_fip(Cell resolution) {
    std::vector<Cell> f = example_fip(resolution);
    f[0] = 40 * resolution / 100;
    return f;
}

BarLayout seven_unit_arrangement_wide(Cell resolution) {
    std::vector<Cell> offsets;
    for (const Cell pct : {0, 60, 30, 35, 10, 0, 10})
        offsets.push_back(pct * resolution / 100);
    return gfs::layout_from_offsets(wide_fip(resolution), resolution, offsets);
}

const Strip* find_strip(const std::vector<Strip>& parts, Cell lo, Cell hi) {
    for (const Strip& st : parts)
        if (st.lo == lo && st.hi == hi) return &st;
    return nullptr;
}

// Breakpoints: distinct interval endpoints across all bars, the cut set the
// sweep enumeration works over.
std::size_t breakpoint_count(const BarLayout& layout) {
    std::set<Cell> cuts;
    for (const auto& bar : layout.bars)
        for (const auto& iv : bar.intervals()) {
            cuts.insert(iv.first);
            cuts.insert(iv.second);
        }
    return cuts.size();
}

bool same_bars(const BarLayout& a, const BarLayout& b) {
    if (a.bars.size() != b.bars.size()) return false;
    for (std::size_t k = 0; k < a.bars.size(); ++k)
        if (!(a.bars[k] == b.bars[k])) return false;
    return true;
}

} // namespace

TEST_CASE("free interchange kernel on the ten-strip refinement") {
    const BarLayout layout = seven_unit_arrangement_wide(100);
    // Refinement of the eight elementary strips with extra cuts at 55 and 80.
    const std::vector<Strip> refinement{
        {0, 10, {0, 5}},      {10, 30, {0, 4, 6}},  {30, 35, {0, 2, 4, 6}},
        {35, 40, {0, 2, 3, 6}}, {40, 55, {2, 3, 6}}, {55, 60, {2, 3, 6}},
        {60, 72, {1, 2, 3, 6}}, {72, 80, {1, 3, 6}}, {80, 90, {1, 3, 6}},
        {90, 100, {3, 6}}};
    ChaoticEngine engine(layout, refinement);
    REQUIRE(engine.strips().size() == 10);

    // Move unit 3 from the [40,55) strip into the [10,30) strip, v = 7
    // (alpha = 7/15 against min height 15).
    engine.interchange(4, 1, 3, 7);

    const auto& parts = engine.strips();
    const Strip* gained = find_strip(parts, 10, 17);
    const Strip* kept_j = find_strip(parts, 17, 30);
    const Strip* lost = find_strip(parts, 40, 47);
    const Strip* kept_i = find_strip(parts, 47, 55);
    REQUIRE(gained != nullptr);
    REQUIRE(kept_j != nullptr);
    REQUIRE(lost != nullptr);
    REQUIRE(kept_i != nullptr);
    CHECK(gained->sample == Sample{0, 3, 4, 6});
    CHECK(kept_j->sample == Sample{0, 4, 6});
    CHECK(lost->sample == Sample{2, 6});
    CHECK(kept_i->sample == Sample{2, 3, 6});

    CHECK(gfs::first_order(engine.design()) == wide_fip(100));
    // {2,3,6} keeps mass 8 in the moved strip plus the untouched 5 next door.
    for (const auto& [s, m] : engine.design().table())
        if (s == Sample{2, 3, 6}) CHECK(m == 13);
}

TEST_CASE("fixed-size interchange swap on the systematic layout") {
    const BarLayout layout = gfs::madow_layout(example_fip(100), 100);
    ChaoticEngine engine(layout);
    REQUIRE(engine.strips().size() == 5);
    REQUIRE(engine.strips()[1].sample == Sample{0, 3, 6});
    REQUIRE(engine.strips()[4].sample == Sample{2, 4, 6});

    // Swap units 0 and 4 between the [10,38) and [75,100) strips, v = 10
    // (alpha = 10/25 against min height 25).
    engine.interchange_swap(1, 4, 0, 4, 10);

    const auto& parts = engine.strips();
    const Strip* a = find_strip(parts, 10, 20);
    const Strip* b = find_strip(parts, 20, 38);
    const Strip* c = find_strip(parts, 75, 85);
    const Strip* d = find_strip(parts, 85, 100);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    REQUIRE(c != nullptr);
    REQUIRE(d != nullptr);
    CHECK(a->sample == Sample{3, 4, 6});
    CHECK(b->sample == Sample{0, 3, 6});
    CHECK(c->sample == Sample{0, 2, 6});
    CHECK(d->sample == Sample{2, 4, 6});

    for (const Strip& st : parts) CHECK(st.sample.size() == 3);
    CHECK(gfs::first_order(engine.design()) == example_fip(100));
}

TEST_CASE("interchange argument validation") {
    const BarLayout layout = gfs::madow_layout(example_fip(100), 100);
    ChaoticEngine engine(layout);
    CHECK_THROWS_AS(engine.interchange(1, 1, 0, 5), gfs::domain_error);
    CHECK_THROWS_AS(engine.interchange(1, 4, 0, 0), gfs::domain_error);
    CHECK_THROWS_AS(engine.interchange(1, 4, 0, 26), gfs::domain_error);
    // unit 6 lies in both strips; unit 4 only in the destination.
    CHECK_THROWS_AS(engine.interchange(1, 4, 6, 5), gfs::domain_error);
    CHECK_THROWS_AS(engine.interchange(1, 4, 4, 5), gfs::domain_error);
    CHECK_THROWS_AS(engine.interchange_swap(1, 4, 0, 6, 5), gfs::domain_error);
    CHECK_THROWS_AS(engine.interchange_swap(1, 4, 6, 4, 5), gfs::domain_error);
}

TEST_CASE("move preconditions") {
    gfs::Rng rng(9);
    ChaoticEngine single(gfs::madow_layout(std::vector<Cell>{100}, 100));
    CHECK_THROWS_AS(single.free_move(rng, 0.5), gfs::domain_error);
    ChaoticEngine pair(gfs::madow_layout(std::vector<Cell>{50, 50}, 100));
    CHECK_THROWS_AS(pair.free_move(rng, 0.0), gfs::domain_error);
    CHECK_THROWS_AS(pair.free_move(rng, 1.5), gfs::domain_error);
}

TEST_CASE("free_move no-op outcomes") {
    SECTION("v floors to zero on unit-height strips") {
        const BarLayout layout = gfs::madow_layout(std::vector<Cell>{1, 1}, 2);
        ChaoticEngine engine(layout);
        gfs::Rng rng(17);
        for (int t = 0; t < 20; ++t) CHECK_FALSE(engine.free_move(rng, 0.9));
        CHECK(same_bars(engine.layout(), layout));
    }
    SECTION("empty difference set between equal-sample strips") {
        const BarLayout layout = gfs::madow_layout(std::vector<Cell>{100}, 100);
        const std::vector<Strip> refinement{{0, 50, {0}}, {50, 100, {0}}};
        ChaoticEngine engine(layout, refinement);
        gfs::Rng rng(17);
        for (int t = 0; t < 20; ++t) CHECK_FALSE(engine.free_move(rng, 0.8));
        CHECK(same_bars(engine.layout(), layout));
    }
}

TEST_CASE("fixed moves cannot leave the unique two-point design") {
    const std::vector<Cell> fip{50, 50};
    const BarLayout start = gfs::madow_layout(fip, 100);
    ChaoticEngine engine(start);
    gfs::Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        engine.fixed_move(rng, 0.7);
        const Design d = engine.design();
        REQUIRE(d.sample_count() == 2);
        CHECK(d.table()[0].sample == Sample{0});
        CHECK(d.table()[0].mass == 50);
        CHECK(d.table()[1].sample == Sample{1});
        CHECK(d.table()[1].mass == 50);
    }
    CHECK(gfs::entropy(engine.design()) == Catch::Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("run_chaotic with zero iterations is the identity") {
    const BarLayout start = gfs::madow_layout(example_fip(1000), 1000);
    MoveParams params;
    params.alpha = 0.5;
    params.iterations = 0;
    params.seed = 5;
    const auto result = gfs::run_chaotic(start, params, MoveMode::fixed_size);
    CHECK(same_bars(result.layout, start));
    CHECK(result.applied == 0);
    CHECK(result.skipped == 0);
    REQUIRE(result.trace.size() == 1);
    CHECK(result.trace[0].move_index == 0);
    CHECK(result.trace[0].entropy ==
          Catch::Approx(gfs::entropy(gfs::aggregate(start))).margin(1e-15));
}

TEST_CASE("inclusion probabilities survive any move sequence exactly") {
    const Cell G = 10000;
    const std::vector<Cell> fip = example_fip(G);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        MoveParams params;
        params.alpha = 0.37;
        params.iterations = 300;
        params.seed = seed;

        gfs::Rng layout_rng(seed * 101);
        const BarLayout free_start = gfs::random_layout(fip, G, layout_rng);
        const auto free_run = gfs::run_chaotic(free_start, params, MoveMode::free_size, 4);
        CHECK(gfs::first_order(gfs::aggregate(free_run.layout)) == fip);

        const BarLayout fixed_start = gfs::madow_layout(fip, G);
        const auto fixed_run = gfs::run_chaotic(fixed_start, params, MoveMode::fixed_size, 4);
        CHECK(gfs::first_order(gfs::aggregate(fixed_run.layout)) == fip);
        for (const Strip& st : gfs::strips(fixed_run.layout))
            CHECK(st.sample.size() == 3);
        CHECK(free_run.applied + free_run.skipped == 300);
        CHECK(fixed_run.applied + fixed_run.skipped == 300);
    }
}

TEST_CASE("breakpoint growth is at most four per applied move") {
    const Cell G = 100000;
    ChaoticEngine engine(gfs::madow_layout(example_fip(G), G));
    gfs::Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        const std::size_t before = breakpoint_count(engine.layout());
        const bool applied = engine.fixed_move(rng, 0.45);
        const std::size_t after = breakpoint_count(engine.layout());
        if (applied) CHECK(after <= before + 4);
        else CHECK(after == before);
    }
    ChaoticEngine free_engine(gfs::madow_layout(example_fip(G), G));
    for (int t = 0; t < 200; ++t) {
        const std::size_t before = breakpoint_count(free_engine.layout());
        const bool applied = free_engine.free_move(rng, 0.45);
        const std::size_t after = breakpoint_count(free_engine.layout());
        if (applied) CHECK(after <= before + 4);
        else CHECK(after == before);
    }
}

TEST_CASE("entropy rises under iteration: sign test over 30 runs") {
    const Cell G = 1000;
    const std::vector<Cell> fip = example_fip(G);
    const BarLayout start = gfs::madow_layout(fip, G);
    int fixed_up = 0;
    int free_up = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        MoveParams params;
        params.alpha = 0.5;
        params.iterations = 400;
        params.seed = seed;
        const auto fixed_run = gfs::run_chaotic(start, params, MoveMode::fixed_size, 1);
        if (fixed_run.trace.back().entropy >= fixed_run.trace.front().entropy) ++fixed_up;
        const auto free_run = gfs::run_chaotic(start, params, MoveMode::free_size, 1);
        if (free_run.trace.back().entropy >= free_run.trace.front().entropy) ++free_up;
    }
    // 22 of 30 is the one-sided binomial(30, 1/2) threshold for p < .01.
    CHECK(fixed_up >= 22);
    CHECK(free_up >= 22);
}

TEST_CASE("identical parameters give identical runs") {
    const BarLayout start = gfs::madow_layout(example_fip(2000), 2000);
    MoveParams params;
    params.alpha = 0.6;
    params.iterations = 120;
    params.seed = 424242;
    const auto a = gfs::run_chaotic(start, params, MoveMode::free_size, 7);
    const auto b = gfs::run_chaotic(start, params, MoveMode::free_size, 7);
    CHECK(same_bars(a.layout, b.layout));
    CHECK(a.applied == b.applied);
    CHECK(a.skipped == b.skipped);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].move_index == b.trace[i].move_index);
        CHECK(a.trace[i].entropy == b.trace[i].entropy);
        CHECK(a.trace[i].strip_count == b.trace[i].strip_count);
    }
}

TEST_CASE("variant flags keep every conservation law") {
    const Cell G = 5000;
    const std::vector<Cell> fip = example_fip(G);
    for (const bool anchor : {false, true}) {
        for (const bool weighted : {false, true}) {
            MoveParams params;
            params.alpha = 0.5;
            params.iterations = 200;
            params.seed = 7 + (anchor ? 1 : 0) + (weighted ? 2 : 0);
            params.random_anchor = anchor;
            params.mass_weighted = weighted;
            const BarLayout start = gfs::madow_layout(fip, G);
            const auto run = gfs::run_chaotic(start, params, MoveMode::fixed_size, 2);
            CHECK(gfs::first_order(gfs::aggregate(run.layout)) == fip);
            for (const Strip& st : gfs::strips(run.layout))
                CHECK(st.sample.size() == 3);
        }
    }
}

TEST_CASE("trace rows expose the mode diagnostics") {
    const BarLayout start = gfs::madow_layout(example_fip(1000), 1000);
    MoveParams params;
    params.alpha = 0.5;
    params.iterations = 50;
    params.seed = 3;

    const auto free_run = gfs::run_chaotic(start, params, MoveMode::free_size, 5);
    REQUIRE(free_run.trace.size() >= 2);
    for (const auto& row : free_run.trace) {
        REQUIRE(row.max_sip_gap.has_value());
        CHECK(*row.max_sip_gap >= 0.0);
        CHECK_FALSE(row.tv_to_oracle.has_value());
    }
    CHECK(free_run.trace.back().move_index == 50);
    CHECK(free_run.applied + free_run.skipped == 50);

    const auto fixed_run = gfs::run_chaotic(
        start, params, MoveMode::fixed_size, 5,
        [](const Design&) { return 0.25; });
    for (const auto& row : fixed_run.trace) {
        CHECK_FALSE(row.max_sip_gap.has_value());
        REQUIRE(row.tv_to_oracle.has_value());
        CHECK(*row.tv_to_oracle == 0.25);
    }
}

TEST_CASE("refinement constructor rejects non-partitions and wrong membership") {
    const BarLayout layout = gfs::madow_layout(std::vector<Cell>{100}, 100);
    CHECK_THROWS_AS(
        ChaoticEngine(layout, {Strip{0, 40, {0}}, Strip{50, 100, {0}}}),
        gfs::domain_error);
    CHECK_THROWS_AS(
        ChaoticEngine(layout, {Strip{0, 50, {}}, Strip{50, 100, {0}}}),
        gfs::domain_error);
    CHECK_THROWS_AS(
        ChaoticEngine(layout, {Strip{0, 100, {0}}, Strip{0, 100, {0}}}),
        gfs::domain_error);
}
