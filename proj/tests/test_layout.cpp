#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "gfs/design.hpp"
#include "gfs/layout.hpp"

using gfs::BarLayout;
using gfs::Cell;

namespace {

constexpr Cell G9 = gfs::kDefaultResolution;

// Inclusion probabilities used throughout the worked examples:
// {.38, .30, .42, .65, .25, .10, .90}.
std::vector<Cell> example_fip(Cell resolution) {
    std::vector<Cell> f;
    for (const Cell pct : {38, 30, 42, 65, 25, 10, 90})
        f.push_back(pct * resolution / 100);
    return f;
}

} // namespace

TEST_CASE("fip_from_aux: equal sizes share the target evenly") {
    const std::vector<double> x{1, 1, 1, 1};
    const auto sol = gfs::fip_from_aux(x, 2, G9);
    for (Cell c : sol.cells) CHECK(c == G9 / 2);
    CHECK(sol.max_residual <= 1e-9);
}

TEST_CASE("fip_from_aux: saturation pins large units at 1") {
    const std::vector<double> x{10, 1, 1};
    const auto sol = gfs::fip_from_aux(x, 2, G9);
    CHECK(sol.cells == std::vector<Cell>{G9, G9 / 2, G9 / 2});
}

TEST_CASE("fip_from_aux: proportional case without saturation") {
    const std::vector<double> x{2, 1, 1};
    const auto sol = gfs::fip_from_aux(x, 1, G9);
    CHECK(sol.cells == std::vector<Cell>{G9 / 2, G9 / 4, G9 / 4});
}

TEST_CASE("fip_from_aux: exact total and bounded residual on irregular sizes") {
    gfs::Rng rng(99);
    for (int round = 0; round < 20; ++round) {
        const std::size_t N = 5 + rng.below(40);
        const std::size_t n = 1 + rng.below(N);
        std::vector<double> x(N);
        for (double& v : x) v = 0.05 + rng.uniform01() * 30.0;
        const auto sol = gfs::fip_from_aux(x, n, G9);
        unsigned __int128 total = 0;
        for (Cell c : sol.cells) {
            CHECK(c <= G9);
            total += c;
        }
        REQUIRE(total == static_cast<unsigned __int128>(n) * G9);
        CHECK(sol.max_residual <= 2.0 / static_cast<double>(G9) + 1e-12);
    }
}

TEST_CASE("fip_from_aux: infeasible inputs are rejected") {
    CHECK_THROWS_AS(gfs::fip_from_aux(std::vector<double>{1, 1}, 3, G9), gfs::domain_error);
    CHECK_THROWS_AS(gfs::fip_from_aux(std::vector<double>{1, 0, 0}, 2, G9), gfs::domain_error);
    CHECK_THROWS_AS(gfs::fip_from_aux(std::vector<double>{1, -1, 1}, 2, G9), gfs::domain_error);
    CHECK_THROWS_AS(gfs::fip_from_aux(std::vector<double>{1, 1}, 0, G9), gfs::domain_error);
}

TEST_CASE("random_layout: full bar is forced") {
    gfs::Rng rng(1);
    const std::vector<Cell> fip{G9};
    const BarLayout layout = gfs::random_layout(fip, G9, rng);
    REQUIRE(layout.bars[0].intervals().size() == 1);
    CHECK(layout.bars[0].intervals()[0] == std::pair<Cell, Cell>{0, G9});
}

TEST_CASE("layout_from_offsets reproduces the worked seven-unit arrangement") {
    const std::vector<Cell> fip = example_fip(100);
    const std::vector<Cell> offsets{0, 60, 30, 35, 10, 0, 10};
    const BarLayout layout = gfs::layout_from_offsets(fip, 100, offsets);
    layout.validate();
    CHECK(layout.bars[1].intervals()[0] == std::pair<Cell, Cell>{60, 90});
    CHECK(layout.bars[3].intervals()[0] == std::pair<Cell, Cell>{35, 100});
    CHECK(layout.bars[6].intervals()[0] == std::pair<Cell, Cell>{10, 100});
    CHECK(gfs::intersection_measure(layout.bars[1], layout.bars[2]).cells == 12);
}

TEST_CASE("layout_from_offsets rejects bars that stick out") {
    CHECK_THROWS_AS(
        gfs::layout_from_offsets(std::vector<Cell>{50}, 100, std::vector<Cell>{60}),
        gfs::domain_error);
}

TEST_CASE("random_layout: any seed satisfies the measure invariant") {
    const std::vector<Cell> fip = example_fip(G9);
    for (std::uint64_t seed : {7ULL, 8ULL}) {
        gfs::Rng rng(seed);
        const BarLayout layout = gfs::random_layout(fip, G9, rng);
        layout.validate();
        for (std::size_t k = 0; k < fip.size(); ++k) {
            CHECK(layout.bars[k].measure().cells == fip[k]);
            CHECK(layout.bars[k].intervals().size() == 1);
        }
    }
}

TEST_CASE("madow_layout matches the worked fixed-size design exactly") {
    const BarLayout layout = gfs::madow_layout(example_fip(100), 100);
    const gfs::Design design = gfs::aggregate(layout);

    using Row = std::pair<gfs::Sample, Cell>;
    const std::vector<Row> expected{
        {{0, 2, 5}, 10}, {{0, 3, 6}, 28}, {{1, 3, 6}, 30}, {{2, 3, 6}, 7}, {{2, 4, 6}, 25}};
    REQUIRE(design.table().size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) {
        CHECK(design.table()[t].sample == expected[t].first);
        CHECK(design.table()[t].mass == expected[t].second);
    }
    // Unit 3 wraps around 1, so its bar has two intervals.
    CHECK(layout.bars[2].intervals().size() == 2);
}

TEST_CASE("madow_layout trivial cases") {
    const BarLayout single = gfs::madow_layout(std::vector<Cell>{G9}, G9);
    CHECK(single.bars[0].intervals()[0] == std::pair<Cell, Cell>{0, G9});
    const gfs::Design d1 = gfs::aggregate(single);
    REQUIRE(d1.table().size() == 1);
    CHECK(d1.table()[0].sample == gfs::Sample{0});
    CHECK(d1.table()[0].mass == G9);

    const BarLayout halves = gfs::madow_layout(std::vector<Cell>{G9 / 2, G9 / 2}, G9);
    const gfs::Design d2 = gfs::aggregate(halves);
    REQUIRE(d2.table().size() == 2);
    CHECK(d2.table()[0].sample == gfs::Sample{0});
    CHECK(d2.table()[0].mass == G9 / 2);
    CHECK(d2.table()[1].sample == gfs::Sample{1});
    CHECK(d2.table()[1].mass == G9 / 2);
}

TEST_CASE("madow_layout with whole sample size covers every cell exactly n times") {
    const BarLayout layout = gfs::madow_layout(example_fip(G9), G9);
    Cell covered = 0;
    for (const gfs::Strip& st : gfs::strips(layout)) {
        CHECK(st.sample.size() == 3);
        covered += st.height();
    }
    CHECK(covered == G9);

    // A fractional total keeps per-unit measures but not constant size.
    const std::vector<Cell> frac{G9 / 2, G9 / 4};
    const BarLayout loose = gfs::madow_layout(frac, G9);
    loose.validate();
}

TEST_CASE("population columns must have matching lengths") {
    gfs::Population pop;
    pop.size = 3;
    pop.x = {1.0, 2.0, 3.0};
    pop.validate();
    pop.y = {1.0};
    CHECK_THROWS_AS(pop.validate(), gfs::domain_error);
}
