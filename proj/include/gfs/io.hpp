#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gfs/design.hpp"
#include "gfs/layout.hpp"

namespace gfs {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kLayoutFormatTag = "gfs-layout/1";

// Layout document: exact integers only; intervals are [lo, hi) cell pairs.
inline ordered_json layout_to_json(const BarLayout& layout) {
    layout.validate();
    ordered_json doc;
    doc["format"] = kLayoutFormatTag;
    doc["grid_resolution"] = layout.resolution;
    doc["units"] = layout.unit_count();
    doc["fip"] = layout.fip;
    ordered_json intervals = ordered_json::array();
    for (const IntervalSet& bar : layout.bars) {
        ordered_json unit = ordered_json::array();
        for (const auto& [lo, hi] : bar.intervals())
            unit.push_back(ordered_json::array({lo, hi}));
        intervals.push_back(std::move(unit));
    }
    doc["intervals"] = std::move(intervals);
    return doc;
}

inline BarLayout layout_from_json(const ordered_json& doc) {
    try {
        detail::require(doc.at("format").get<std::string>() == kLayoutFormatTag,
                        "layout document: unrecognized format tag");
        BarLayout layout;
        layout.resolution = doc.at("grid_resolution").get<Cell>();
        detail::require(layout.resolution >= 1, "layout document: bad grid_resolution");
        layout.fip = doc.at("fip").get<std::vector<Cell>>();
        const auto& intervals = doc.at("intervals");
        detail::require(intervals.is_array() && intervals.size() == layout.fip.size(),
                        "layout document: intervals/fip size mismatch");
        for (const auto& unit : intervals) {
            IntervalSet bar(layout.resolution);
            for (const auto& iv : unit) {
                detail::require(iv.is_array() && iv.size() == 2,
                                "layout document: interval is not a pair");
                bar.insert_range(iv[0].get<Cell>(), iv[1].get<Cell>());
            }
            layout.bars.push_back(std::move(bar));
        }
        layout.validate();
        return layout;
    } catch (const ordered_json::exception& e) {
        throw io_error(std::string("layout document: ") + e.what());
    }
}

inline void save_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << body;
    if (!out) throw io_error("write failed: " + path);
}

inline std::string load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void save_layout(const std::string& path, const BarLayout& layout) {
    save_text(path, layout_to_json(layout).dump(2) + "\n");
}

inline BarLayout load_layout(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(load_text(path));
    } catch (const ordered_json::exception& e) {
        throw io_error("layout document " + path + ": " + e.what());
    }
    return layout_from_json(doc);
}

struct ColumnMap {
    std::string x_col;  // auxiliary size / probability column
    std::string y_col;  // study variable (optional)
    std::string z_col;  // optimization variable (optional)
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    out.push_back(field);
    for (std::string& f : out) {
        const auto begin = f.find_first_not_of(" \t");
        const auto end = f.find_last_not_of(" \t");
        f = begin == std::string::npos ? std::string() : f.substr(begin, end - begin + 1);
    }
    return out;
}

inline bool parse_double(const std::string& field, double& out) {
    const char* first = field.data();
    const char* last = first + field.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last && !field.empty();
}

} // namespace detail

// CSV ingestion: header row names the columns; designated columns must be
// numeric in every kept row. Offending rows are reported by 1-based data
// row number. `exclude_ids` drops rows by that same numbering.
inline Population ingest_population(const std::string& path, const ColumnMap& columns,
                                    const std::set<std::uint64_t>& exclude_ids = {}) {
    const std::string body = load_text(path);
    std::istringstream in(body);
    std::string line;
    if (!std::getline(in, line)) throw io_error(path + ": empty file");
    const std::vector<std::string> header = detail::split_csv_line(line);

    const auto column_index = [&](const std::string& name, bool required) -> std::ptrdiff_t {
        if (name.empty()) {
            if (required) throw io_error(path + ": required column not specified");
            return -1;
        }
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
        throw io_error(path + ": missing column '" + name + "'");
    };

    const std::ptrdiff_t xi = column_index(columns.x_col, false);
    const std::ptrdiff_t yi = column_index(columns.y_col, false);
    const std::ptrdiff_t zi = column_index(columns.z_col, false);

    Population pop;
    std::vector<std::uint64_t> bad_rows;
    std::uint64_t row_id = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row_id;
        if (exclude_ids.contains(row_id)) continue;
        const std::vector<std::string> fields = detail::split_csv_line(line);
        double xv = 0.0, yv = 0.0, zv = 0.0;
        const auto parse_cell = [&](std::ptrdiff_t idx, double& out) {
            if (idx < 0) return true;
            return static_cast<std::size_t>(idx) < fields.size() &&
                   detail::parse_double(fields[static_cast<std::size_t>(idx)], out);
        };
        if (parse_cell(xi, xv) && parse_cell(yi, yv) && parse_cell(zi, zv)) {
            if (xi >= 0) pop.x.push_back(xv);
            if (yi >= 0) pop.y.push_back(yv);
            if (zi >= 0) pop.z.push_back(zv);
            ++pop.size;
        } else {
            bad_rows.push_back(row_id);
        }
    }
    if (!bad_rows.empty()) {
        std::string msg = path + ": non-numeric designated cells in data row(s)";
        for (std::uint64_t r : bad_rows) msg += " " + std::to_string(r);
        throw io_error(msg);
    }
    if (pop.size == 0) throw io_error(path + ": empty population");
    pop.validate();
    return pop;
}

// Design report: exact masses plus decimal conveniences; unit ids are
// 1-based in documents.
inline ordered_json design_report_json(const Design& design, bool include_sip = true) {
    ordered_json doc;
    doc["format"] = "gfs-design-report/1";
    doc["grid_resolution"] = design.resolution();
    doc["units"] = design.unit_count();
    const double g = static_cast<double>(design.resolution());

    ordered_json samples = ordered_json::array();
    for (const auto& row : design.table()) {
        ordered_json entry;
        ordered_json ids = ordered_json::array();
        for (std::uint32_t k : row.sample) ids.push_back(k + 1);
        entry["sample"] = std::move(ids);
        entry["mass_cells"] = row.mass;
        entry["probability"] = static_cast<double>(row.mass) / g;
        samples.push_back(std::move(entry));
    }
    doc["samples"] = std::move(samples);

    const std::vector<Cell> fip = first_order(design);
    doc["fip_cells"] = fip;
    doc["entropy"] = entropy(design);
    doc["expected_size"] = expected_size(design);
    doc["size_variance"] = size_variance(design);

    if (include_sip) {
        const SipMatrix sip = sip_from_design(design);
        ordered_json pairs = ordered_json::array();
        for (std::size_t k = 0; k < sip.unit_count(); ++k) {
            for (std::size_t l = k + 1; l < sip.unit_count(); ++l) {
                const Cell c = sip.cells.at(k, l);
                if (c == 0) continue;
                pairs.push_back(ordered_json::array(
                    {k + 1, l + 1, c}));
            }
        }
        doc["sip_pairs"] = std::move(pairs);
    }
    return doc;
}

} // namespace gfs
