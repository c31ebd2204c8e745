#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <unordered_set>
#include <vector>

#include "gfs/chaotic.hpp"
#include "gfs/digest.hpp"
#include "gfs/estimator.hpp"
#include "gfs/layout.hpp"

namespace gfs {

struct SearchParams {
    std::uint64_t iterations = 1;        // Lambda
    std::uint32_t nodes_per_iteration = 1;
    std::uint32_t max_open_set_size = 1;
    std::uint32_t moves_per_candidate = 1;
    double alpha = 0.5;
    Criterion criterion = Criterion::c1;
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;           // worker cap; results are thread-count invariant

    void validate() const {
        detail::require(iterations >= 1, "SearchParams: iterations must be >= 1");
        detail::require(nodes_per_iteration >= 1, "SearchParams: nodes_per_iteration must be >= 1");
        detail::require(max_open_set_size >= 1, "SearchParams: max_open_set_size must be >= 1");
        detail::require(moves_per_candidate >= 1, "SearchParams: moves_per_candidate must be >= 1");
        detail::require(alpha > 0.0 && alpha <= 1.0, "SearchParams: alpha outside (0, 1]");
        detail::require(threads >= 1, "SearchParams: threads must be >= 1");
    }
};

struct SearchNode {
    BarLayout layout;
    Digest128 key;
    double cost = 0.0;
    std::uint64_t seq = 0;  // insertion order; breaks priority ties FIFO
};

struct SearchReport {
    std::vector<double> best_cost_per_iteration;
    double initial_cost = 0.0;
    double best_cost = 0.0;
    std::uint64_t iterations_run = 0;
    std::uint64_t expanded = 0;
    std::uint64_t duplicates_skipped = 0;
    std::uint64_t evicted = 0;
    bool open_set_exhausted = false;
    double wall_seconds = 0.0;  // informational; excluded from byte-compared documents
};

struct SearchResult {
    BarLayout best_layout;
    SearchReport report;
};

namespace detail {

struct Candidate {
    BarLayout layout;
    Digest128 key;
    double cost = 0.0;
};

} // namespace detail

// Greedy best-first search over fixed-size layouts. Each iteration pops
// the cheapest open node, spawns nodes_per_iteration candidates by
// applying fixed-size moves with per-candidate RNG streams derived from
// (seed, iteration, candidate), and keeps the cheapest design seen.
// Candidate evaluation is pure, so batches may run on several threads;
// candidates are written into per-index slots, making the outcome
// identical for any thread count.
inline SearchResult search(const Population& population, std::span<const Cell> fip,
                           Cell resolution, const SearchParams& params) {
    const auto start_time = std::chrono::steady_clock::now();
    params.validate();
    population.validate();
    detail::require(!population.z.empty(), "search: population has no z values");
    detail::require(population.size == fip.size(), "search: fip size mismatch");

    unsigned __int128 fip_total = 0;
    for (Cell c : fip) fip_total += c;
    detail::require(fip_total % resolution == 0, "search: fip total is not a whole sample size");

    const std::span<const double> z(population.z);
    const auto evaluate = [&](const BarLayout& layout) -> std::pair<Digest128, double> {
        const Design d = aggregate(layout);
        return {design_key(d), criterion(d, z, fip, params.criterion)};
    };

    BarLayout initial = madow_layout(std::vector<Cell>(fip.begin(), fip.end()), resolution);
    const auto [initial_key, initial_cost] = evaluate(initial);

    SearchResult result;
    result.report.initial_cost = initial_cost;
    BarLayout best_layout = initial;
    double best_cost = initial_cost;

    std::vector<SearchNode> open;
    open.push_back(SearchNode{std::move(initial), initial_key, initial_cost, 0});
    std::unordered_set<Digest128, Digest128Hash> closed;
    std::uint64_t next_seq = 1;

    const auto pop_min = [&]() -> std::optional<SearchNode> {
        while (!open.empty()) {
            std::size_t best_idx = 0;
            for (std::size_t i = 1; i < open.size(); ++i) {
                const bool better = open[i].cost < open[best_idx].cost ||
                                    (open[i].cost == open[best_idx].cost &&
                                     open[i].seq < open[best_idx].seq);
                if (better) best_idx = i;
            }
            SearchNode node = std::move(open[best_idx]);
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_idx));
            if (closed.contains(node.key)) {
                ++result.report.duplicates_skipped;
                continue;
            }
            return node;
        }
        return std::nullopt;
    };

    for (std::uint64_t it = 0; it < params.iterations; ++it) {
        std::optional<SearchNode> current = pop_min();
        if (!current) {
            result.report.open_set_exhausted = true;
            break;
        }
        closed.insert(current->key);
        ++result.report.expanded;
        ++result.report.iterations_run;

        const std::uint32_t n_cand = params.nodes_per_iteration;
        std::vector<detail::Candidate> candidates(n_cand);
        const auto make_candidate = [&](std::uint32_t c) {
            ChaoticEngine engine(current->layout);
            Rng rng(derive_seed(params.seed, it + 1, c + 1));
            for (std::uint32_t m = 0; m < params.moves_per_candidate; ++m) {
                if (engine.strips().size() < 2) break;
                engine.fixed_move(rng, params.alpha);
            }
            detail::Candidate cand;
            cand.layout = std::move(engine).take_layout();
            const auto [key, cost] = evaluate(cand.layout);
            cand.key = key;
            cand.cost = cost;
            candidates[c] = std::move(cand);
        };

        const std::uint32_t workers = std::min(params.threads, n_cand);
        if (workers <= 1) {
            for (std::uint32_t c = 0; c < n_cand; ++c) make_candidate(c);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::uint32_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::uint32_t c = w; c < n_cand; c += workers) make_candidate(c);
                });
            }
            for (auto& t : pool) t.join();
        }

        for (auto& cand : candidates) {
            if (closed.contains(cand.key)) {
                ++result.report.duplicates_skipped;
                continue;
            }
            if (cand.cost < best_cost) {
                best_cost = cand.cost;
                best_layout = cand.layout;
            }
            if (open.size() >= params.max_open_set_size) {
                std::size_t worst = 0;
                for (std::size_t i = 1; i < open.size(); ++i) {
                    const bool worse = open[i].cost > open[worst].cost ||
                                       (open[i].cost == open[worst].cost &&
                                        open[i].seq < open[worst].seq);
                    if (worse) worst = i;
                }
                open.erase(open.begin() + static_cast<std::ptrdiff_t>(worst));
                ++result.report.evicted;
            }
            open.push_back(SearchNode{std::move(cand.layout), cand.key, cand.cost, next_seq++});
        }
        result.report.best_cost_per_iteration.push_back(best_cost);
    }

    result.report.best_cost = best_cost;
    best_layout.validate();
    result.best_layout = std::move(best_layout);
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return result;
}

} // namespace gfs
