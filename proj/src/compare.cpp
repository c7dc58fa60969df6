#include "pcells/compare.hpp"

#include "pcells/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

namespace pcells {

std::string_view to_string(Dimension dimension)
{
    switch (dimension) {
    case Dimension::PublicationYear: return "publication_year";
    case Dimension::WindowLength: return "window_length";
    case Dimension::AdjacentCell: return "adjacent_cell";
    }
    return "unknown";
}

std::string_view to_string(Metric metric)
{
    return metric == Metric::E ? "e" : "t";
}

double relative_difference(double x, double y)
{
    if (!(x > 0.0) || !(y > 0.0)) {
        throw Error(ErrorCode::NonPositiveValue, "relative difference needs positive values");
    }
    return 2.0 * std::abs(x - y) / (x + y);
}

std::string context_label(const CellKey& cell, int year, int window)
{
    return cell.str() + "|" + std::to_string(year) + "|w" + std::to_string(window);
}

void sort_records(std::vector<DifferenceRecord>& records)
{
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.dimension, a.metric, a.left_label, a.right_label) <
               std::tie(b.dimension, b.metric, b.left_label, b.right_label);
    });
}

namespace {

struct Side {
    CellKey cell;
    int year;
    int window;
};

class Pairer {
public:
    Pairer(const ReferenceTable& table, Dimension dimension, Metric metric)
        : table_(table), dimension_(dimension), metric_(metric)
    {
    }

    void compare(const Side& left, const Side& right)
    {
        const auto left_label = context_label(left.cell, left.year, left.window);
        const auto right_label = context_label(right.cell, right.year, right.window);
        std::string reason;
        const auto x = lookup(left, reason);
        const auto y = lookup(right, reason);
        if (!x || !y) {
            result_.skipped.push_back(std::string(to_string(dimension_)) + "/" + std::string(to_string(metric_)) +
                                      " " + left_label + " vs " + right_label + ":" + reason);
            return;
        }
        result_.records.push_back(
            {dimension_, metric_, left_label, right_label, *x, *y, relative_difference(*x, *y)});
    }

    PairingResult finish()
    {
        sort_records(result_.records);
        return std::move(result_);
    }

private:
    std::optional<double> lookup(const Side& side, std::string& reason) const
    {
        const auto label = context_label(side.cell, side.year, side.window);
        if (side.window < 1) {
            reason += " invalid window at " + label;
            return std::nullopt;
        }
        const auto* entry = table_.find(side.cell, side.year, CitationWindow(side.window));
        if (entry == nullptr) {
            reason += " no reference values for " + label;
            return std::nullopt;
        }
        const double value = metric_ == Metric::E ? entry->e : entry->t;
        if (!(value > 0.0)) {
            reason += " non-positive value at " + label;
            return std::nullopt;
        }
        return value;
    }

    const ReferenceTable& table_;
    Dimension dimension_;
    Metric metric_;
    PairingResult result_;
};

}  // namespace

PairingResult year_dimension_pairs(const ReferenceTable& table, std::span<const std::pair<int, int>> year_pairs,
                                   std::span<const CellKey> cells, std::span<const int> windows, Metric metric)
{
    Pairer pairer(table, Dimension::PublicationYear, metric);
    for (const auto& cell : cells) {
        for (int window : windows) {
            for (const auto& [a, b] : year_pairs) {
                pairer.compare({cell, a, window}, {cell, b, window});
            }
        }
    }
    return pairer.finish();
}

PairingResult window_dimension_pairs(const ReferenceTable& table,
                                     std::span<const std::pair<int, int>> window_pairs,
                                     std::span<const CellKey> cells, std::span<const int> years, Metric metric)
{
    Pairer pairer(table, Dimension::WindowLength, metric);
    for (const auto& cell : cells) {
        for (int year : years) {
            for (const auto& [a, b] : window_pairs) {
                pairer.compare({cell, year, a}, {cell, year, b});
            }
        }
    }
    return pairer.finish();
}

PairingResult cell_dimension_pairs(const ReferenceTable& table, std::span<const AdjacentTriple> triples,
                                   std::span<const int> years, std::span<const int> windows, Metric metric)
{
    Pairer pairer(table, Dimension::AdjacentCell, metric);
    for (const auto& triple : triples) {
        for (int year : years) {
            for (int window : windows) {
                pairer.compare({triple.left, year, window}, {triple.middle, year, window});
                pairer.compare({triple.middle, year, window}, {triple.right, year, window});
            }
        }
    }
    return pairer.finish();
}

DimensionSummary summarize_dimension(std::span<const DifferenceRecord> records)
{
    if (records.empty()) {
        throw Error(ErrorCode::EmptyDistribution, "no difference records to summarize");
    }
    DimensionSummary summary;
    summary.dimension = records.front().dimension;
    summary.metric = records.front().metric;
    summary.count = records.size();
    summary.min_r = records.front().r;
    summary.max_r = records.front().r;
    for (const auto& record : records) {
        if (record.dimension != summary.dimension || record.metric != summary.metric) {
            throw Error(ErrorCode::MixedDimensions, "records span more than one dimension/metric");
        }
        summary.min_r = std::min(summary.min_r, record.r);
        summary.max_r = std::max(summary.max_r, record.r);
    }
    return summary;
}

std::vector<DimensionSummary> summarize_all(std::span<const DifferenceRecord> records)
{
    std::map<std::pair<Dimension, Metric>, std::vector<DifferenceRecord>> groups;
    for (const auto& record : records) {
        groups[{record.dimension, record.metric}].push_back(record);
    }
    std::vector<DimensionSummary> summaries;
    for (const auto& [key, group] : groups) {
        summaries.push_back(summarize_dimension(group));
    }
    return summaries;
}

}  // namespace pcells
