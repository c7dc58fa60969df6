#include "pcells/reference.hpp"

#include "pcells/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pcells {

CitationWindow::CitationWindow(int length_years) : years_(length_years)
{
    if (length_years < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "citation window must span at least one year, got " + std::to_string(length_years));
    }
}

ReferenceTable::ReferenceTable(std::vector<ReferenceValues> entries) : entries_(std::move(entries))
{
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.cell, a.year, a.window) < std::tie(b.cell, b.year, b.window);
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        ReferenceContext ctx{entry.cell, entry.year, entry.window.years()};
        if (!index_.emplace(ctx, i).second) {
            throw Error(ErrorCode::InvalidArgument,
                        "duplicate reference entry for " + entry.cell.str() + " " + std::to_string(entry.year) +
                            " window " + std::to_string(entry.window.years()),
                        entry.cell.str());
        }
    }
}

const ReferenceValues* ReferenceTable::find(const CellKey& cell, int year, CitationWindow window) const
{
    auto it = index_.find(ReferenceContext{cell, year, window.years()});
    return it == index_.end() ? nullptr : &entries_[it->second];
}

std::int64_t citation_count(const PublicationRecord& pub, CitationWindow window)
{
    const auto& cites = pub.citations_by_year;
    auto first = cites.lower_bound(pub.year);
    auto last = cites.upper_bound(window.last_year(pub.year));
    return std::accumulate(first, last, std::int64_t{0},
                           [](std::int64_t sum, const auto& kv) { return sum + kv.second; });
}

std::vector<std::int64_t> cell_distribution(const CellPartition& partition, const Corpus& corpus,
                                            const CellKey& cell, int year, CitationWindow window)
{
    std::vector<std::int64_t> counts;
    const auto* ids = partition.members(cell);
    if (ids == nullptr) {
        return counts;
    }
    for (const auto& id : *ids) {
        const auto* pub = corpus.find(id);
        if (pub != nullptr && pub->year == year) {
            counts.push_back(citation_count(*pub, window));
        }
    }
    return counts;
}

double mean_expected_citations(std::span<const std::int64_t> distribution)
{
    if (distribution.empty()) {
        throw Error(ErrorCode::EmptyDistribution, "mean of an empty distribution");
    }
    const auto total = std::accumulate(distribution.begin(), distribution.end(), std::int64_t{0});
    return static_cast<double>(total) / static_cast<double>(distribution.size());
}

CssScores css_scores(std::span<const std::int64_t> distribution, int k)
{
    if (distribution.empty()) {
        throw Error(ErrorCode::EmptyDistribution, "CSS scores of an empty distribution");
    }
    if (k < 1) {
        throw Error(ErrorCode::InvalidArgument, "CSS needs k >= 1");
    }
    std::vector<std::int64_t> sorted(distribution.begin(), distribution.end());
    std::sort(sorted.begin(), sorted.end());
    // suffix[i] = sum of sorted[i..n)
    std::vector<std::int64_t> suffix(sorted.size() + 1, 0);
    for (std::size_t i = sorted.size(); i-- > 0;) {
        suffix[i] = suffix[i + 1] + sorted[i];
    }

    CssScores css;
    css.scores.reserve(static_cast<std::size_t>(k));
    std::size_t begin = 0;
    double score = static_cast<double>(suffix[0]) / static_cast<double>(sorted.size());
    css.scores.push_back(score);
    for (int m = 2; m <= k; ++m) {
        // Retain values >= previous score; the maximum always qualifies.
        auto it = std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(begin), sorted.end(), score,
                                   [](std::int64_t v, double s) { return static_cast<double>(v) < s; });
        const auto next = static_cast<std::size_t>(it - sorted.begin());
        if (next != begin) {
            begin = next;
            ++css.iterations;
            score = static_cast<double>(suffix[begin]) / static_cast<double>(sorted.size() - begin);
        }
        css.scores.push_back(score);
    }
    return css;
}

double outstanding_threshold(std::span<const std::int64_t> distribution, int k)
{
    return css_scores(distribution, k).scores.back();
}

ReferenceTable build_reference_table(const CellPartition& partition, const Corpus& corpus,
                                     std::span<const int> years, std::span<const int> windows, int k)
{
    if (years.empty() || windows.empty()) {
        throw Error(ErrorCode::InvalidArgument, "reference table needs at least one year and one window");
    }
    const std::set<int> year_set(years.begin(), years.end());
    std::vector<CitationWindow> window_list;
    for (int w : std::set<int>(windows.begin(), windows.end())) {
        window_list.emplace_back(w);
    }

    std::vector<ReferenceValues> entries;
    for (const auto& [cell, ids] : partition.cells()) {
        std::map<int, std::vector<const PublicationRecord*>> by_year;
        for (const auto& id : ids) {
            const auto* pub = corpus.find(id);
            if (pub != nullptr && year_set.contains(pub->year)) {
                by_year[pub->year].push_back(pub);
            }
        }
        for (const auto& [year, pubs] : by_year) {
            for (const auto window : window_list) {
                std::vector<std::int64_t> counts;
                counts.reserve(pubs.size());
                for (const auto* pub : pubs) {
                    counts.push_back(citation_count(*pub, window));
                }
                ReferenceValues entry;
                entry.cell = cell;
                entry.year = year;
                entry.window = window;
                entry.n = counts.size();
                entry.e = mean_expected_citations(counts);
                entry.css = css_scores(counts, k);
                entry.t = entry.css.scores.back();
                entries.push_back(std::move(entry));
            }
        }
    }
    return ReferenceTable(std::move(entries));
}

namespace {

const ReferenceValues& require_reference(const PublicationRecord& pub, const ReferenceTable& table,
                                         CitationWindow window)
{
    const auto cell = pub.cell();
    const auto* entry = table.find(cell, pub.year, window);
    if (entry == nullptr) {
        throw Error(ErrorCode::MissingReference,
                    "no reference values for " + cell.str() + ", " + std::to_string(pub.year) + ", window " +
                        std::to_string(window.years()),
                    pub.pub_id);
    }
    return *entry;
}

}  // namespace

NormalizedScore normalized_citation_score(const PublicationRecord& pub, const ReferenceTable& table,
                                          CitationWindow window)
{
    const auto& entry = require_reference(pub, table, window);
    if (entry.e <= 0.0) {
        throw Error(ErrorCode::ZeroExpectation,
                    "expected citation rate is zero for " + entry.cell.str() + ", " + std::to_string(entry.year),
                    pub.pub_id);
    }
    NormalizedScore score;
    score.pub_id = pub.pub_id;
    score.observed = citation_count(pub, window);
    score.expected = entry.e;
    score.ratio = static_cast<double>(score.observed) / entry.e;
    return score;
}

double aggregate_normalized(std::span<const NormalizedScore> scores, AggregationMode mode)
{
    if (scores.empty()) {
        throw Error(ErrorCode::EmptyDistribution, "no normalized scores to aggregate");
    }
    for (const auto& s : scores) {
        if (!(s.expected > 0.0)) {
            throw Error(ErrorCode::ZeroExpectation, "normalized score with non-positive expectation", s.pub_id);
        }
    }
    if (mode == AggregationMode::MeanOfRatios) {
        double sum = 0.0;
        for (const auto& s : scores) {
            sum += s.ratio;
        }
        return sum / static_cast<double>(scores.size());
    }
    double observed = 0.0;
    double expected = 0.0;
    for (const auto& s : scores) {
        observed += static_cast<double>(s.observed);
        expected += s.expected;
    }
    return observed / expected;
}

bool flag_highly_cited(const PublicationRecord& pub, const ReferenceTable& table, CitationWindow window)
{
    const auto& entry = require_reference(pub, table, window);
    return static_cast<double>(citation_count(pub, window)) >= entry.t;
}

}  // namespace pcells
