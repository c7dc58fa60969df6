#ifndef PCELLS_PROFILE_HPP
#define PCELLS_PROFILE_HPP

#include "pcells/corpus.hpp"
#include "pcells/reference.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pcells {

// How one researcher's admitted articles spread over partition cells.
struct ResearcherProfile {
    std::string researcher_id;
    std::size_t n_articles = 0;
    std::map<CellKey, std::size_t> counts;
    std::map<CellKey, double> shares;
    // Every cell attaining the maximum share, in key order.
    std::vector<CellKey> top_cells;
    double mean_citations = 0.0;
};

// Considers the researcher's publications admitted to `partition` whose year
// lies in `period`; mean_citations averages window counts over all of them
// jointly. Throws EmptyProfile when nothing qualifies.
ResearcherProfile researcher_profile(const Corpus& corpus, const CellPartition& partition,
                                     std::string_view researcher_id, YearRange period, CitationWindow window);

// Cosine similarity of the two share vectors over the union of their cells.
double profile_overlap(const ResearcherProfile& a, const ResearcherProfile& b);

}  // namespace pcells

#endif
