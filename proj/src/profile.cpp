#include "pcells/profile.hpp"

#include "pcells/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pcells {

ResearcherProfile researcher_profile(const Corpus& corpus, const CellPartition& partition,
                                     std::string_view researcher_id, YearRange period, CitationWindow window)
{
    ResearcherProfile profile;
    profile.researcher_id = std::string(researcher_id);
    std::int64_t citations = 0;
    for (const auto& pub : corpus.publications()) {
        if (!period.contains(pub.year) ||
            !std::binary_search(pub.author_ids.begin(), pub.author_ids.end(), researcher_id)) {
            continue;
        }
        const auto cell = partition.cell_of(pub.pub_id);
        if (!cell) {
            continue;
        }
        ++profile.counts[*cell];
        ++profile.n_articles;
        citations += citation_count(pub, window);
    }
    if (profile.n_articles == 0) {
        throw Error(ErrorCode::EmptyProfile,
                    "researcher '" + profile.researcher_id + "' has no admitted articles in " +
                        std::to_string(period.first) + "-" + std::to_string(period.last),
                    profile.researcher_id);
    }

    std::size_t top = 0;
    for (const auto& [cell, count] : profile.counts) {
        profile.shares[cell] = static_cast<double>(count) / static_cast<double>(profile.n_articles);
        top = std::max(top, count);
    }
    // Ties are decided on integer counts so every top cell has the exact maximum share.
    for (const auto& [cell, count] : profile.counts) {
        if (count == top) {
            profile.top_cells.push_back(cell);
        }
    }
    profile.mean_citations = static_cast<double>(citations) / static_cast<double>(profile.n_articles);
    return profile;
}

double profile_overlap(const ResearcherProfile& a, const ResearcherProfile& b)
{
    if (a.shares.empty() || b.shares.empty()) {
        throw Error(ErrorCode::EmptyProfile, "overlap needs two non-empty profiles");
    }
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (const auto& [cell, share] : a.shares) {
        norm_a += share * share;
        if (auto it = b.shares.find(cell); it != b.shares.end()) {
            dot += share * it->second;
        }
    }
    for (const auto& [cell, share] : b.shares) {
        norm_b += share * share;
    }
    return std::clamp(dot / std::sqrt(norm_a * norm_b), 0.0, 1.0);
}

}  // namespace pcells
