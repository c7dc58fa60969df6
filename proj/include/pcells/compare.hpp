#ifndef PCELLS_COMPARE_HPP
#define PCELLS_COMPARE_HPP

#include "pcells/corpus.hpp"
#include "pcells/reference.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcells {

enum class Dimension { PublicationYear, WindowLength, AdjacentCell };
enum class Metric { E, T };

std::string_view to_string(Dimension dimension);
std::string_view to_string(Metric metric);

/// One comparison of two positive reference values. Labels name the compared
/// contexts as "<cell>|<year>|w<window>".
struct DifferenceRecord {
    Dimension dimension = Dimension::PublicationYear;
    Metric metric = Metric::E;
    std::string left_label;
    std::string right_label;
    double x = 0.0;
    double y = 0.0;
    double r = 0.0;
};

struct DimensionSummary {
    Dimension dimension = Dimension::PublicationYear;
    Metric metric = Metric::E;
    std::size_t count = 0;
    double min_r = 0.0;
    double max_r = 0.0;
};

// Comparisons plus the reasons for every pair that was left out.
struct PairingResult {
    std::vector<DifferenceRecord> records;
    std::vector<std::string> skipped;
};

// 2|x - y| / (x + y). Throws NonPositiveValue unless both inputs are > 0.
double relative_difference(double x, double y);

std::string context_label(const CellKey& cell, int year, int window);

PairingResult year_dimension_pairs(const ReferenceTable& table, std::span<const std::pair<int, int>> year_pairs,
                                   std::span<const CellKey> cells, std::span<const int> windows, Metric metric);

PairingResult window_dimension_pairs(const ReferenceTable& table,
                                     std::span<const std::pair<int, int>> window_pairs,
                                     std::span<const CellKey> cells, std::span<const int> years, Metric metric);

// Two comparisons per triple: left-middle and middle-right.
PairingResult cell_dimension_pairs(const ReferenceTable& table, std::span<const AdjacentTriple> triples,
                                   std::span<const int> years, std::span<const int> windows, Metric metric);

// Throws EmptyDistribution on no records, MixedDimensions when records do
// not share one (dimension, metric).
DimensionSummary summarize_dimension(std::span<const DifferenceRecord> records);

// One summary per (dimension, metric) present, in that order.
std::vector<DimensionSummary> summarize_all(std::span<const DifferenceRecord> records);

// Orders by (dimension, metric, left label, right label).
void sort_records(std::vector<DifferenceRecord>& records);

}  // namespace pcells

#endif
