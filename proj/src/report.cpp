#include "pcells/report.hpp"

#include "pcells/error.hpp"

#include "csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

namespace pcells {

std::string_view toolkit_version()
{
    return "1.0.0";
}

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double value, int decimals)
{
    if (std::isnan(value)) {
        return {};
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string out = buf;
    if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1);  // no "-0.0"
    }
    return out;
}

// JSON mirror of `fixed`, so both formats carry the same rounded value.
ordered_json fixed_json(double value, int decimals)
{
    if (std::isnan(value)) {
        return nullptr;
    }
    const auto text = fixed(value, decimals);
    if (decimals == 0) {
        return std::stoll(text);
    }
    return std::stod(text);
}

void check_spec(const ReportSpec& spec)
{
    const auto& r = spec.rounding;
    if (r.values < 0 || r.shares < 0 || r.means < 0 || r.percents < 0) {
        throw Error(ErrorCode::InvalidArgument, "rounding must be non-negative for every field family");
    }
}

std::string csv_preamble(std::string_view kind, const ReportSpec& spec)
{
    std::string out = "# pcells " + std::string(toolkit_version()) + "\n";
    out += "# report: " + std::string(kind) + "\n";
    out += "# input_digest: " + spec.metadata.input_digest + "\n";
    for (const auto& [key, value] : spec.metadata.parameters) {
        out += "# param " + key + "=" + value + "\n";
    }
    return out;
}

ordered_json json_meta(std::string_view kind, const ReportSpec& spec)
{
    ordered_json meta;
    meta["toolkit"] = "pcells";
    meta["version"] = toolkit_version();
    meta["report"] = kind;
    meta["input_digest"] = spec.metadata.input_digest;
    auto params = ordered_json::object();
    for (const auto& [key, value] : spec.metadata.parameters) {
        params[key] = value;
    }
    meta["parameters"] = std::move(params);
    return meta;
}

double css_at(const ReferenceValues& entry, std::size_t i)
{
    return i < entry.css.scores.size() ? entry.css.scores[i] : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string emit_reference_table(const ReferenceTable& table, const ReportSpec& spec)
{
    check_spec(spec);
    if (table.empty()) {
        throw Error(ErrorCode::EmptyReport, "reference table has no entries");
    }
    const int d = spec.rounding.values;
    if (spec.format == ReportFormat::Json) {
        ordered_json doc;
        doc["meta"] = json_meta("reference_table", spec);
        auto rows = ordered_json::array();
        for (const auto& entry : table.entries()) {
            ordered_json row;
            row["cell"] = entry.cell.str();
            row["year"] = entry.year;
            row["window"] = entry.window.years();
            row["n"] = entry.n;
            row["e"] = fixed_json(entry.e, d);
            row["t"] = fixed_json(entry.t, d);
            row["css_b1"] = fixed_json(css_at(entry, 0), d);
            row["css_b2"] = fixed_json(css_at(entry, 1), d);
            row["css_b3"] = fixed_json(css_at(entry, 2), d);
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }
    std::string out = csv_preamble("reference_table", spec);
    out += reference_csv_header;
    out += '\n';
    for (const auto& entry : table.entries()) {
        csv::append_row(out, {entry.cell.str(), std::to_string(entry.year), std::to_string(entry.window.years()),
                              std::to_string(entry.n), fixed(entry.e, d), fixed(entry.t, d),
                              fixed(css_at(entry, 0), d), fixed(css_at(entry, 1), d), fixed(css_at(entry, 2), d)});
    }
    return out;
}

std::string emit_profile_matrix(std::span<const ResearcherProfile> profiles, const ReportSpec& spec)
{
    check_spec(spec);
    if (profiles.empty()) {
        throw Error(ErrorCode::EmptyReport, "no researcher profiles to report");
    }
    std::map<CellKey, bool> cells;
    for (const auto& profile : profiles) {
        for (const auto& [cell, share] : profile.shares) {
            if (share > 0.0) {
                cells[cell] = true;
            }
        }
    }
    const int ds = spec.rounding.shares;
    const int dm = spec.rounding.means;
    auto share_of = [](const ResearcherProfile& p, const CellKey& cell) {
        auto it = p.shares.find(cell);
        return it == p.shares.end() ? 0.0 : it->second * 100.0;
    };
    auto is_top = [](const ResearcherProfile& p, const CellKey& cell) {
        return std::find(p.top_cells.begin(), p.top_cells.end(), cell) != p.top_cells.end();
    };

    if (spec.format == ReportFormat::Json) {
        ordered_json doc;
        doc["meta"] = json_meta("profile_matrix", spec);
        auto researchers = ordered_json::array();
        for (const auto& p : profiles) {
            researchers.push_back(p.researcher_id);
        }
        doc["researchers"] = std::move(researchers);
        auto rows = ordered_json::array();
        auto layer_row = [&](std::string_view layer, std::string_view cell, auto value_of) {
            ordered_json row;
            row["layer"] = layer;
            row["cell"] = cell;
            auto values = ordered_json::array();
            for (const auto& p : profiles) {
                values.push_back(value_of(p));
            }
            row["values"] = std::move(values);
            rows.push_back(std::move(row));
        };
        for (const auto& [cell, unused] : cells) {
            layer_row("share", cell.str(), [&](const auto& p) { return fixed_json(share_of(p, cell), ds); });
        }
        for (const auto& [cell, unused] : cells) {
            layer_row("top", cell.str(), [&](const auto& p) { return ordered_json(is_top(p, cell) ? 1 : 0); });
        }
        layer_row("n_articles", "", [](const auto& p) { return ordered_json(p.n_articles); });
        layer_row("mean_citations", "", [&](const auto& p) { return fixed_json(p.mean_citations, dm); });
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }

    std::string out = csv_preamble("profile_matrix", spec);
    std::vector<std::string> header{"layer", "cell"};
    for (const auto& p : profiles) {
        header.push_back(p.researcher_id);
    }
    csv::append_row(out, header);
    for (const auto& [cell, unused] : cells) {
        std::vector<std::string> row{"share", cell.str()};
        for (const auto& p : profiles) {
            row.push_back(fixed(share_of(p, cell), ds));
        }
        csv::append_row(out, row);
    }
    for (const auto& [cell, unused] : cells) {
        std::vector<std::string> row{"top", cell.str()};
        for (const auto& p : profiles) {
            row.emplace_back(is_top(p, cell) ? "1" : "0");
        }
        csv::append_row(out, row);
    }
    std::vector<std::string> counts{"n_articles", ""};
    std::vector<std::string> means{"mean_citations", ""};
    for (const auto& p : profiles) {
        counts.push_back(std::to_string(p.n_articles));
        means.push_back(fixed(p.mean_citations, dm));
    }
    csv::append_row(out, counts);
    csv::append_row(out, means);
    return out;
}

std::string emit_difference_summary(std::span<const DifferenceRecord> records,
                                    std::span<const DimensionSummary> summaries, const ReportSpec& spec)
{
    check_spec(spec);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyReport, "no difference records to report");
    }
    std::vector<DifferenceRecord> sorted(records.begin(), records.end());
    sort_records(sorted);
    std::vector<DimensionSummary> blocks(summaries.begin(), summaries.end());
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
        return std::tie(a.dimension, a.metric) < std::tie(b.dimension, b.metric);
    });
    const int dv = spec.rounding.values;
    const int dp = spec.rounding.percents;

    if (spec.format == ReportFormat::Json) {
        ordered_json doc;
        doc["meta"] = json_meta("difference_summary", spec);
        auto rows = ordered_json::array();
        for (const auto& r : sorted) {
            ordered_json row;
            row["dimension"] = to_string(r.dimension);
            row["metric"] = to_string(r.metric);
            row["left"] = r.left_label;
            row["right"] = r.right_label;
            row["x"] = fixed_json(r.x, dv);
            row["y"] = fixed_json(r.y, dv);
            row["r_percent"] = fixed_json(r.r * 100.0, dp);
            rows.push_back(std::move(row));
        }
        doc["records"] = std::move(rows);
        auto summary = ordered_json::array();
        for (const auto& s : blocks) {
            ordered_json row;
            row["dimension"] = to_string(s.dimension);
            row["metric"] = to_string(s.metric);
            row["count"] = s.count;
            row["min_r_percent"] = fixed_json(s.min_r * 100.0, dp);
            row["max_r_percent"] = fixed_json(s.max_r * 100.0, dp);
            summary.push_back(std::move(row));
        }
        doc["summary"] = std::move(summary);
        return doc.dump(2) + "\n";
    }

    std::string out = csv_preamble("difference_summary", spec);
    out += difference_csv_header;
    out += '\n';
    for (const auto& r : sorted) {
        csv::append_row(out, {std::string(to_string(r.dimension)), std::string(to_string(r.metric)), r.left_label,
                              r.right_label, fixed(r.x, dv), fixed(r.y, dv), fixed(r.r * 100.0, dp)});
    }
    out += '\n';
    out += summary_csv_header;
    out += '\n';
    for (const auto& s : blocks) {
        csv::append_row(out, {std::string(to_string(s.dimension)), std::string(to_string(s.metric)),
                              std::to_string(s.count), fixed(s.min_r * 100.0, dp), fixed(s.max_r * 100.0, dp)});
    }
    return out;
}

ReferenceTable parse_reference_table(std::string_view csv_text)
{
    csv::Reader reader(csv_text);
    auto header = reader.next();
    std::string header_text;
    if (header) {
        for (std::size_t i = 0; i < header->fields.size(); ++i) {
            header_text += (i ? "," : "") + header->fields[i];
        }
    }
    if (header_text != reference_csv_header) {
        throw Error(ErrorCode::RowParseError,
                    "reference table must start with header '" + std::string(reference_csv_header) + "'", {},
                    header ? header->line : 1);
    }
    auto number = [](const std::string& text, std::size_t line, bool optional) {
        if (text.empty() && optional) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value) || value < 0.0) {
            throw Error(ErrorCode::RowParseError,
                        "line " + std::to_string(line) + ": '" + text + "' is not a non-negative number", {}, line);
        }
        return value;
    };
    std::vector<ReferenceValues> entries;
    while (auto row = reader.next()) {
        const auto line = row->line;
        const auto& f = row->fields;
        if (f.size() != 9) {
            throw Error(ErrorCode::RowParseError, "line " + std::to_string(line) + ": expected 9 fields", {}, line);
        }
        ReferenceValues entry;
        try {
            entry.cell = CellKey::parse(f[0]);
            entry.year = std::stoi(f[1]);
            entry.window = CitationWindow(std::stoi(f[2]));
            entry.n = static_cast<std::size_t>(std::stoull(f[3]));
        } catch (const Error& e) {
            throw Error(ErrorCode::RowParseError, "line " + std::to_string(line) + ": " + e.what(), {}, line);
        } catch (const std::exception&) {
            throw Error(ErrorCode::RowParseError, "line " + std::to_string(line) + ": bad cell/year/window/n", {},
                        line);
        }
        entry.e = number(f[4], line, false);
        entry.t = number(f[5], line, false);
        for (std::size_t i = 6; i < 9; ++i) {
            entry.css.scores.push_back(number(f[i], line, true));
        }
        while (!entry.css.scores.empty() && std::isnan(entry.css.scores.back())) {
            entry.css.scores.pop_back();
        }
        if (entry.n == 0 || entry.t < entry.e) {
            throw Error(ErrorCode::RowParseError,
                        "line " + std::to_string(line) + ": entries need n >= 1 and t >= e", {}, line);
        }
        entries.push_back(std::move(entry));
    }
    return ReferenceTable(std::move(entries));
}

}  // namespace pcells
