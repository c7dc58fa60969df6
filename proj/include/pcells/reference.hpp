#ifndef PCELLS_REFERENCE_HPP
#define PCELLS_REFERENCE_HPP

#include "pcells/corpus.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace pcells {

/// Number of whole calendar years over which citations are counted, starting
/// with (and including) the publication year.
class CitationWindow {
public:
    // Throws InvalidArgument for lengths below one year.
    explicit CitationWindow(int length_years);

    int years() const noexcept { return years_; }
    int last_year(int publication_year) const noexcept { return publication_year + years_ - 1; }

    auto operator<=>(const CitationWindow&) const = default;

private:
    int years_;
};

inline constexpr int default_css_k = 3;

/// Characteristic scores b_1..b_k of a citation distribution. b_1 is the
/// plain mean; each further score is the mean of the values at or above the
/// previous one.
struct CssScores {
    std::vector<double> scores;
    // Number of truncation steps that changed the retained subset.
    int iterations = 0;

    double b(int m) const { return scores.at(static_cast<std::size_t>(m - 1)); }
    int k() const noexcept { return static_cast<int>(scores.size()); }
};

struct ReferenceValues {
    CellKey cell;
    int year = 0;
    CitationWindow window{1};
    std::size_t n = 0;
    double e = 0.0;
    CssScores css;
    double t = 0.0;
};

// Lookup key of a reference table entry.
struct ReferenceContext {
    CellKey cell;
    int year = 0;
    int window = 0;

    auto operator<=>(const ReferenceContext&) const = default;
};

/// Reference values for every populated (cell, year, window), iterated in
/// (cell, year, window) order.
class ReferenceTable {
public:
    ReferenceTable() = default;
    explicit ReferenceTable(std::vector<ReferenceValues> entries);

    const std::vector<ReferenceValues>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const ReferenceValues* find(const CellKey& cell, int year, CitationWindow window) const;

private:
    std::vector<ReferenceValues> entries_;
    std::map<ReferenceContext, std::size_t> index_;
};

std::int64_t citation_count(const PublicationRecord& pub, CitationWindow window);

// One count per admitted publication of `cell` published in `year`, in
// ascending pub_id order.
std::vector<std::int64_t> cell_distribution(const CellPartition& partition, const Corpus& corpus,
                                            const CellKey& cell, int year, CitationWindow window);

double mean_expected_citations(std::span<const std::int64_t> distribution);

CssScores css_scores(std::span<const std::int64_t> distribution, int k = default_css_k);

// T = b_k of the CSS scores.
double outstanding_threshold(std::span<const std::int64_t> distribution, int k = default_css_k);

ReferenceTable build_reference_table(const CellPartition& partition, const Corpus& corpus,
                                     std::span<const int> years, std::span<const int> windows,
                                     int k = default_css_k);

struct NormalizedScore {
    std::string pub_id;
    std::int64_t observed = 0;
    double expected = 0.0;
    double ratio = 0.0;
};

// Throws MissingReference when the publication's (cell, year, window) has no
// entry and ZeroExpectation when its e is zero.
NormalizedScore normalized_citation_score(const PublicationRecord& pub, const ReferenceTable& table,
                                          CitationWindow window);

enum class AggregationMode { MeanOfRatios, RatioOfSums };

double aggregate_normalized(std::span<const NormalizedScore> scores, AggregationMode mode);

// count >= T of the publication's reference entry.
bool flag_highly_cited(const PublicationRecord& pub, const ReferenceTable& table, CitationWindow window);

}  // namespace pcells

#endif
