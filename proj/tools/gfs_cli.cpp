#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gfs/gfs.hpp"

namespace {

using gfs::Cell;
using gfs::ordered_json;

std::set<std::uint64_t> parse_id_list(const std::string& text) {
    std::set<std::uint64_t> ids;
    std::string field;
    std::istringstream in(text);
    while (std::getline(in, field, ',')) {
        if (field.empty()) continue;
        std::size_t used = 0;
        const std::uint64_t id = std::stoull(field, &used);
        if (used != field.size()) throw gfs::io_error("bad id list entry: " + field);
        ids.insert(id);
    }
    return ids;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::string field;
    std::istringstream in(text);
    while (std::getline(in, field, ',')) {
        if (field.empty()) continue;
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw gfs::io_error("bad numeric list entry: " + field);
    }
    return values;
}

// Text rendering: YAML-ish flattening of the same document emitted as JSON,
// scalars printed with the JSON serializer so both formats stay in sync.
void print_text(const ordered_json& value, std::ostream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (value.is_object()) {
        for (const auto& [key, child] : value.items()) {
            if (child.is_object() || (child.is_array() && !child.empty() &&
                                      (child[0].is_object() || child[0].is_array()))) {
                os << pad << key << ":\n";
                print_text(child, os, indent + 1);
            } else {
                os << pad << key << ": " << child.dump() << "\n";
            }
        }
    } else if (value.is_array()) {
        for (const auto& child : value) {
            if (child.is_object()) {
                os << pad << "-\n";
                print_text(child, os, indent + 1);
            } else {
                os << pad << "- " << child.dump() << "\n";
            }
        }
    } else {
        os << pad << value.dump() << "\n";
    }
}

void emit(const ordered_json& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.dump(2) << "\n";
    } else {
        print_text(doc, std::cout, 0);
    }
}

struct PopulationArgs {
    std::string path;
    std::string x_col;
    std::string y_col;
    std::string z_col;
    std::string exclude;

    void attach(CLI::App* cmd, bool require_pop) {
        auto* pop = cmd->add_option("--pop", path, "population CSV file");
        if (require_pop) pop->required();
        cmd->add_option("--x-col", x_col, "auxiliary size column");
        cmd->add_option("--y-col", y_col, "study variable column");
        cmd->add_option("--z-col", z_col, "optimization variable column");
        cmd->add_option("--exclude-ids", exclude,
                        "comma-separated 1-based data row ids to drop");
    }

    gfs::Population load() const {
        gfs::ColumnMap columns{x_col, y_col, z_col};
        return gfs::ingest_population(path, columns, parse_id_list(exclude));
    }
};

std::vector<double> pi_from_layout(const gfs::BarLayout& layout) {
    std::vector<double> pi;
    pi.reserve(layout.fip.size());
    for (Cell c : layout.fip)
        pi.push_back(static_cast<double>(c) / static_cast<double>(layout.resolution));
    return pi;
}

std::size_t integral_sample_size(const gfs::BarLayout& layout) {
    unsigned __int128 total = 0;
    for (Cell c : layout.fip) total += c;
    if (total % layout.resolution != 0)
        throw gfs::domain_error("layout is not fixed-size: FIP total is not a whole multiple "
                                "of the grid resolution");
    return static_cast<std::size_t>(total / layout.resolution);
}

ordered_json trace_to_json(const std::vector<gfs::TraceRow>& trace) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : trace) {
        ordered_json entry;
        entry["move"] = row.move_index;
        entry["applied"] = row.applied;
        entry["skipped"] = row.skipped;
        entry["entropy"] = row.entropy;
        entry["strips"] = row.strip_count;
        if (row.max_sip_gap) entry["max_sip_gap"] = *row.max_sip_gap;
        if (row.tv_to_oracle) entry["tv_to_oracle"] = *row.tv_to_oracle;
        rows.push_back(std::move(entry));
    }
    return rows;
}

gfs::Criterion parse_criterion(const std::string& name) {
    if (name == "c1") return gfs::Criterion::c1;
    if (name == "c2") return gfs::Criterion::c2;
    if (name == "c3") return gfs::Criterion::c3;
    throw gfs::domain_error("unknown criterion: " + name);
}

int cmd_construct(const PopulationArgs& pop_args, const std::string& x_mode, std::size_t pps_n,
                  const std::string& mode, Cell grid, std::optional<std::uint64_t> seed,
                  const std::string& out, const std::string& format) {
    const gfs::Population pop = pop_args.load();
    if (pop.x.empty()) throw gfs::io_error("construct needs --x-col");

    std::vector<Cell> fip;
    double residual = 0.0;
    if (x_mode == "pps") {
        if (pps_n == 0) throw gfs::domain_error("construct --pps-n must be >= 1");
        const gfs::FipSolution sol = gfs::fip_from_aux(pop.x, pps_n, grid);
        fip = sol.cells;
        residual = sol.max_residual;
    } else { // x values are the inclusion probabilities themselves
        const double g = static_cast<double>(grid);
        for (double p : pop.x) {
            if (!(p >= 0.0 && p <= 1.0))
                throw gfs::domain_error("construct: probability outside [0, 1]");
            const Cell cells = static_cast<Cell>(std::llround(p * g));
            fip.push_back(cells);
            residual = std::max(residual, std::abs(static_cast<double>(cells) / g - p));
        }
    }

    gfs::BarLayout layout;
    if (mode == "madow") {
        layout = gfs::madow_layout(fip, grid);
    } else {
        if (!seed) throw gfs::domain_error("construct --mode random requires --seed");
        gfs::Rng rng(*seed);
        layout = gfs::random_layout(fip, grid, rng);
    }
    gfs::save_layout(out, layout);

    ordered_json doc;
    doc["format"] = "gfs-construct-report/1";
    doc["grid_resolution"] = grid;
    doc["units"] = fip.size();
    doc["mode"] = mode;
    doc["fip_cells"] = fip;
    doc["fip_residual"] = residual;
    doc["layout_path"] = out;
    emit(doc, format);
    return 0;
}

int cmd_chaotic(const std::string& in, const std::string& out, const std::string& mode,
                double alpha, std::uint64_t iters, std::uint64_t seed, std::size_t checkpoints,
                const std::string& oracle, bool random_anchor, bool mass_weighted,
                const std::string& format) {
    const gfs::BarLayout start = gfs::load_layout(in);
    gfs::MoveParams params;
    params.alpha = alpha;
    params.iterations = iters;
    params.seed = seed;
    params.random_anchor = random_anchor;
    params.mass_weighted = mass_weighted;
    const gfs::MoveMode move_mode =
        mode == "free" ? gfs::MoveMode::free_size : gfs::MoveMode::fixed_size;

    std::function<double(const gfs::Design&)> reference;
    if (oracle == "poisson") {
        const gfs::ReferenceDesign ref = gfs::poisson_design(pi_from_layout(start));
        reference = [ref](const gfs::Design& d) { return gfs::total_variation(d, ref); };
    } else if (oracle == "maxent") {
        const gfs::ReferenceDesign ref =
            gfs::maxent_design(pi_from_layout(start), integral_sample_size(start));
        reference = [ref](const gfs::Design& d) { return gfs::total_variation(d, ref); };
    } else if (!oracle.empty()) {
        throw gfs::domain_error("unknown oracle: " + oracle);
    }

    const gfs::ChaoticResult result =
        gfs::run_chaotic(start, params, move_mode, checkpoints, reference);
    gfs::save_layout(out, result.layout);

    ordered_json doc;
    doc["format"] = "gfs-chaotic-report/1";
    doc["mode"] = mode;
    doc["alpha"] = alpha;
    doc["iterations"] = iters;
    doc["seed"] = seed;
    doc["applied"] = result.applied;
    doc["skipped"] = result.skipped;
    doc["layout_path"] = out;
    doc["trace"] = trace_to_json(result.trace);
    emit(doc, format);
    return 0;
}

int cmd_draw(const std::string& in, std::uint64_t seed, const std::string& format) {
    const gfs::BarLayout layout = gfs::load_layout(in);
    gfs::Rng rng(seed);
    const Cell r = rng.below(layout.resolution);
    const gfs::Sample sample = gfs::sample_at(layout, r);

    ordered_json doc;
    doc["format"] = "gfs-draw-report/1";
    doc["grid_resolution"] = layout.resolution;
    doc["r_cell"] = r;
    doc["r"] = static_cast<double>(r) / static_cast<double>(layout.resolution);
    ordered_json ids = ordered_json::array();
    for (std::uint32_t k : sample) ids.push_back(k + 1);
    doc["sample"] = std::move(ids);
    emit(doc, format);
    return 0;
}

int cmd_evaluate(const std::string& in, const PopulationArgs& pop_args,
                 std::optional<std::uint64_t> seed, bool with_sip, const std::string& format) {
    const gfs::BarLayout layout = gfs::load_layout(in);
    const gfs::Design design = gfs::aggregate(layout);

    ordered_json doc;
    doc["format"] = "gfs-evaluate-report/1";
    doc["design"] = gfs::design_report_json(design, with_sip);

    if (!pop_args.path.empty()) {
        const gfs::Population pop = pop_args.load();
        if (pop.y.empty()) throw gfs::io_error("evaluate needs --y-col when --pop is given");
        if (pop.size != layout.unit_count())
            throw gfs::domain_error("evaluate: population size does not match the layout");
        const std::vector<double>& z = pop.z.empty() ? pop.y : pop.z;

        ordered_json est;
        double true_total = 0.0;
        for (double v : pop.y) true_total += v;
        est["true_total"] = true_total;
        est["variance"] = gfs::design_variance(design, pop.y, layout.fip);
        est["c1"] = gfs::criterion(design, z, layout.fip, gfs::Criterion::c1);
        est["c2"] = gfs::criterion(design, z, layout.fip, gfs::Criterion::c2);
        est["c3"] = gfs::criterion(design, z, layout.fip, gfs::Criterion::c3);

        if (seed) {
            gfs::Rng rng(*seed);
            const Cell r = rng.below(layout.resolution);
            const gfs::Sample sample = gfs::sample_at(layout, r);
            est["r_cell"] = r;
            ordered_json ids = ordered_json::array();
            for (std::uint32_t k : sample) ids.push_back(k + 1);
            est["sample"] = std::move(ids);
            est["total_estimate"] = gfs::nht_total(sample, pop.y, layout.fip, layout.resolution);
            const gfs::SipMatrix sip = gfs::second_order(layout);
            if (gfs::sip_is_fixed_size(sip, layout.fip)) {
                est["estimator"] = "syg";
                est["variance_estimate"] =
                    gfs::variance_estimator_syg(sample, pop.y, layout.fip, sip);
            } else {
                est["estimator"] = "ht";
                est["variance_estimate"] =
                    gfs::variance_estimator_ht(sample, pop.y, layout.fip, sip);
            }
        }
        doc["estimate"] = std::move(est);
    }
    emit(doc, format);
    return 0;
}

int cmd_optimize(const PopulationArgs& pop_args, const std::string& x_mode, std::size_t pps_n,
                 Cell grid, const std::string& criterion, std::uint64_t lambda,
                 std::uint32_t nodes, std::uint32_t open_max, std::uint32_t moves_per_candidate,
                 double alpha, std::uint64_t seed, std::uint32_t threads, const std::string& out,
                 const std::string& format) {
    const gfs::Population pop = pop_args.load();
    if (pop.z.empty()) throw gfs::io_error("optimize needs --z-col");
    if (pop.x.empty()) throw gfs::io_error("optimize needs --x-col");

    std::vector<Cell> fip;
    if (x_mode == "pps") {
        if (pps_n == 0) throw gfs::domain_error("optimize --pps-n must be >= 1");
        fip = gfs::fip_from_aux(pop.x, pps_n, grid).cells;
    } else {
        const double g = static_cast<double>(grid);
        for (double p : pop.x) {
            if (!(p >= 0.0 && p <= 1.0))
                throw gfs::domain_error("optimize: probability outside [0, 1]");
            fip.push_back(static_cast<Cell>(std::llround(p * g)));
        }
    }

    gfs::SearchParams params;
    params.iterations = lambda;
    params.nodes_per_iteration = nodes;
    params.max_open_set_size = open_max;
    params.moves_per_candidate = moves_per_candidate;
    params.alpha = alpha;
    params.criterion = parse_criterion(criterion);
    params.seed = seed;
    params.threads = threads;

    const gfs::SearchResult result = gfs::search(pop, fip, grid, params);
    gfs::save_layout(out, result.best_layout);

    ordered_json doc;
    doc["format"] = "gfs-optimize-report/1";
    doc["criterion"] = criterion;
    doc["lambda"] = lambda;
    doc["nodes_per_iteration"] = nodes;
    doc["max_open_set_size"] = open_max;
    doc["moves_per_candidate"] = moves_per_candidate;
    doc["alpha"] = alpha;
    doc["seed"] = seed;
    doc["initial_cost"] = result.report.initial_cost;
    doc["best_cost"] = result.report.best_cost;
    doc["efficiency"] = gfs::efficiency(result.report.initial_cost, result.report.best_cost);
    doc["iterations_run"] = result.report.iterations_run;
    doc["expanded"] = result.report.expanded;
    doc["duplicates_skipped"] = result.report.duplicates_skipped;
    doc["evicted"] = result.report.evicted;
    doc["open_set_exhausted"] = result.report.open_set_exhausted;
    doc["best_layout_path"] = out;
    doc["trajectory"] = result.report.best_cost_per_iteration;
    emit(doc, format);
    // Wall time is run-dependent; keep it out of the byte-compared document.
    std::cerr << "wall_seconds " << result.report.wall_seconds << "\n";
    return 0;
}

int cmd_oracle(const std::string& kind, const std::string& in, const std::string& pi_list,
               std::size_t n_sample, std::size_t units, const std::string& format) {
    ordered_json doc;
    doc["format"] = "gfs-oracle-report/1";
    doc["kind"] = kind;

    if (kind == "srs") {
        if (units == 0) throw gfs::domain_error("oracle srs requires --units");
        const auto sip = gfs::srs_sip(units, n_sample);
        doc["units"] = units;
        doc["sample_size"] = n_sample;
        doc["pi"] = sip.at(0, 0);
        doc["pi_joint"] = units > 1 ? sip.at(0, 1) : sip.at(0, 0);
        emit(doc, format);
        return 0;
    }

    std::vector<double> pi;
    if (!in.empty()) pi = pi_from_layout(gfs::load_layout(in));
    else if (!pi_list.empty()) pi = parse_double_list(pi_list);
    else throw gfs::io_error("oracle needs --in or --pi");

    gfs::ReferenceDesign ref;
    if (kind == "poisson") {
        ref = gfs::poisson_design(pi);
    } else if (kind == "maxent") {
        if (n_sample == 0) {
            double total = 0.0;
            for (double p : pi) total += p;
            n_sample = static_cast<std::size_t>(std::llround(total));
        }
        ref = gfs::maxent_design(pi, n_sample);
    } else {
        throw gfs::domain_error("unknown oracle kind: " + kind);
    }

    doc["units"] = ref.n_units;
    doc["entropy"] = ref.entropy();
    doc["fip"] = ref.first_order();
    ordered_json rows = ordered_json::array();
    for (const auto& row : ref.rows) {
        ordered_json entry;
        ordered_json ids = ordered_json::array();
        for (std::uint32_t k : row.sample) ids.push_back(k + 1);
        entry["sample"] = std::move(ids);
        entry["probability"] = row.probability;
        rows.push_back(std::move(entry));
    }
    doc["samples"] = std::move(rows);
    emit(doc, format);
    return 0;
}

int cmd_plot(const std::string& in, const std::string& out) {
    const gfs::BarLayout layout = gfs::load_layout(in);
    gfs::save_text(out, gfs::render_svg(layout));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric finite-population sampling toolkit"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"json", "text"});

    // construct
    auto* construct = app.add_subcommand("construct", "build a layout from a population");
    PopulationArgs construct_pop;
    construct_pop.attach(construct, true);
    std::string construct_mode = "madow";
    Cell construct_grid = gfs::kDefaultResolution;
    std::size_t construct_pps_n = 0;
    bool construct_x_as_pi = false;
    std::uint64_t construct_seed = 0;
    bool construct_seed_set = false;
    std::string construct_out;
    std::string construct_format = "json";
    construct->add_option("--mode", construct_mode, "layout mode")
        ->check(CLI::IsMember({"madow", "random"}));
    construct->add_option("--grid", construct_grid, "grid resolution");
    construct->add_option("--pps-n", construct_pps_n, "target sample size for PPS probabilities");
    construct->add_flag("--x-as-pi", construct_x_as_pi,
                        "x column already holds inclusion probabilities");
    construct->add_option("--seed", construct_seed, "RNG seed (required for --mode random)")
        ->each([&](const std::string&) { construct_seed_set = true; });
    construct->add_option("--out", construct_out, "layout output path")->required();
    construct->add_option("--format", construct_format, "report format")->check(format_check);

    // chaotic
    auto* chaotic = app.add_subcommand("chaotic", "iterate entropy-increasing moves");
    std::string chaotic_in, chaotic_out, chaotic_mode, chaotic_oracle;
    double chaotic_alpha = 0.5;
    std::uint64_t chaotic_iters = 0;
    std::uint64_t chaotic_seed = 0;
    std::size_t chaotic_checkpoints = 100;
    bool chaotic_anchor = false;
    bool chaotic_weighted = false;
    std::string chaotic_format = "json";
    chaotic->add_option("--in", chaotic_in, "layout input path")->required();
    chaotic->add_option("--out", chaotic_out, "layout output path")->required();
    chaotic->add_option("--mode", chaotic_mode, "move kind")
        ->required()
        ->check(CLI::IsMember({"free", "fixed"}));
    chaotic->add_option("--alpha", chaotic_alpha, "substrip fraction in (0, 1]");
    chaotic->add_option("--iters", chaotic_iters, "number of moves")->required();
    chaotic->add_option("--seed", chaotic_seed, "RNG seed")->required();
    chaotic->add_option("--checkpoints", chaotic_checkpoints, "trace checkpoint count");
    chaotic->add_option("--oracle", chaotic_oracle, "reference design for TV diagnostics")
        ->check(CLI::IsMember({"poisson", "maxent"}));
    chaotic->add_flag("--random-anchor", chaotic_anchor, "randomize substrip anchors");
    chaotic->add_flag("--mass-weighted", chaotic_weighted, "pick strips by mass");
    chaotic->add_option("--format", chaotic_format, "report format")->check(format_check);

    // draw
    auto* draw = app.add_subcommand("draw", "draw one sample from a layout");
    std::string draw_in;
    std::uint64_t draw_seed = 0;
    std::string draw_format = "json";
    draw->add_option("--in", draw_in, "layout input path")->required();
    draw->add_option("--seed", draw_seed, "RNG seed")->required();
    draw->add_option("--format", draw_format, "report format")->check(format_check);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "report design diagnostics and estimates");
    std::string evaluate_in;
    PopulationArgs evaluate_pop;
    evaluate_pop.attach(evaluate, false);
    std::uint64_t evaluate_seed = 0;
    bool evaluate_seed_set = false;
    bool evaluate_no_sip = false;
    std::string evaluate_format = "json";
    evaluate->add_option("--in", evaluate_in, "layout input path")->required();
    evaluate->add_option("--seed", evaluate_seed, "draw a sample and estimate")
        ->each([&](const std::string&) { evaluate_seed_set = true; });
    evaluate->add_flag("--no-sip", evaluate_no_sip, "omit the SIP pair table");
    evaluate->add_option("--format", evaluate_format, "report format")->check(format_check);

    // optimize
    auto* optimize = app.add_subcommand("optimize", "search for a low-variance design");
    PopulationArgs optimize_pop;
    optimize_pop.attach(optimize, true);
    Cell optimize_grid = gfs::kDefaultResolution;
    std::size_t optimize_pps_n = 0;
    bool optimize_x_as_pi = false;
    std::string optimize_criterion = "c1";
    std::uint64_t optimize_lambda = 100;
    std::uint32_t optimize_nodes = 10;
    std::uint32_t optimize_open_max = 50;
    std::uint32_t optimize_moves = 1;
    double optimize_alpha = 0.5;
    std::uint64_t optimize_seed = 0;
    std::uint32_t optimize_threads = 1;
    std::string optimize_out;
    std::string optimize_format = "json";
    optimize->add_option("--grid", optimize_grid, "grid resolution");
    optimize->add_option("--pps-n", optimize_pps_n, "target sample size for PPS probabilities");
    optimize->add_flag("--x-as-pi", optimize_x_as_pi,
                       "x column already holds inclusion probabilities");
    optimize->add_option("--criterion", optimize_criterion, "cost criterion")
        ->check(CLI::IsMember({"c1", "c2", "c3"}));
    optimize->add_option("--lambda", optimize_lambda, "search iterations");
    optimize->add_option("--nodes", optimize_nodes, "candidates per iteration");
    optimize->add_option("--open-max", optimize_open_max, "open set capacity");
    optimize->add_option("--moves-per-candidate", optimize_moves, "moves applied per candidate");
    optimize->add_option("--alpha", optimize_alpha, "substrip fraction in (0, 1]");
    optimize->add_option("--seed", optimize_seed, "RNG seed")->required();
    optimize->add_option("--threads", optimize_threads, "worker thread cap");
    optimize->add_option("--out", optimize_out, "best layout output path")->required();
    optimize->add_option("--format", optimize_format, "report format")->check(format_check);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "inspect reference designs");
    std::string oracle_kind, oracle_in, oracle_pi;
    std::size_t oracle_n = 0;
    std::size_t oracle_units = 0;
    std::string oracle_format = "json";
    oracle->add_option("--kind", oracle_kind, "reference kind")
        ->required()
        ->check(CLI::IsMember({"poisson", "maxent", "srs"}));
    oracle->add_option("--in", oracle_in, "layout input path (probabilities from its FIP)");
    oracle->add_option("--pi", oracle_pi, "comma-separated inclusion probabilities");
    oracle->add_option("--n", oracle_n, "sample size (maxent, srs)");
    oracle->add_option("--units", oracle_units, "population size (srs)");
    oracle->add_option("--format", oracle_format, "report format")->check(format_check);

    // plot
    auto* plot = app.add_subcommand("plot", "render a layout as an SVG bar chart");
    std::string plot_in, plot_out;
    plot->add_option("--in", plot_in, "layout input path")->required();
    plot->add_option("--out", plot_out, "SVG output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) {
            if (construct_pps_n == 0 && !construct_x_as_pi)
                throw gfs::domain_error("construct needs --pps-n or --x-as-pi");
            if (construct_pps_n > 0 && construct_x_as_pi)
                throw gfs::domain_error("construct takes --pps-n or --x-as-pi, not both");
            return cmd_construct(construct_pop, construct_x_as_pi ? "pi" : "pps",
                                 construct_pps_n, construct_mode, construct_grid,
                                 construct_seed_set ? std::optional(construct_seed)
                                                    : std::nullopt,
                                 construct_out, construct_format);
        }
        if (chaotic->parsed())
            return cmd_chaotic(chaotic_in, chaotic_out, chaotic_mode, chaotic_alpha,
                               chaotic_iters, chaotic_seed, chaotic_checkpoints, chaotic_oracle,
                               chaotic_anchor, chaotic_weighted, chaotic_format);
        if (draw->parsed()) return cmd_draw(draw_in, draw_seed, draw_format);
        if (evaluate->parsed())
            return cmd_evaluate(evaluate_in, evaluate_pop,
                                evaluate_seed_set ? std::optional(evaluate_seed) : std::nullopt,
                                !evaluate_no_sip, evaluate_format);
        if (optimize->parsed()) {
            if (optimize_pps_n == 0 && !optimize_x_as_pi)
                throw gfs::domain_error("optimize needs --pps-n or --x-as-pi");
            return cmd_optimize(optimize_pop, optimize_x_as_pi ? "pi" : "pps", optimize_pps_n,
                                optimize_grid, optimize_criterion, optimize_lambda,
                                optimize_nodes, optimize_open_max, optimize_moves,
                                optimize_alpha, optimize_seed, optimize_threads, optimize_out,
                                optimize_format);
        }
        if (oracle->parsed())
            return cmd_oracle(oracle_kind, oracle_in, oracle_pi, oracle_n, oracle_units,
                              oracle_format);
        if (plot->parsed()) return cmd_plot(plot_in, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
