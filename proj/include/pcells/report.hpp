#ifndef PCELLS_REPORT_HPP
#define PCELLS_REPORT_HPP

#include "pcells/compare.hpp"
#include "pcells/profile.hpp"
#include "pcells/reference.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcells {

std::string_view toolkit_version();

enum class ReportFormat { Csv, Json };

// Decimal places per field family. Values are stored at full precision and
// rounded only here.
struct Rounding {
    int values = 1;    // e, T, CSS scores, compared x/y (citations per article)
    int shares = 0;    // profile shares, in percent
    int means = 0;     // per-researcher mean citations
    int percents = 1;  // r, in percent
};

struct ReportMetadata {
    std::string input_digest;
    std::vector<std::pair<std::string, std::string>> parameters;
};

struct ReportSpec {
    ReportFormat format = ReportFormat::Csv;
    Rounding rounding;
    ReportMetadata metadata;
};

inline constexpr std::string_view reference_csv_header = "cell,year,window,n,e,t,css_b1,css_b2,css_b3";
inline constexpr std::string_view difference_csv_header = "dimension,metric,left,right,x,y,r_percent";
inline constexpr std::string_view summary_csv_header = "dimension,metric,count,min_r_percent,max_r_percent";

// Throws EmptyReport on empty input and InvalidArgument on negative rounding.
std::string emit_reference_table(const ReferenceTable& table, const ReportSpec& spec);

// Rows are the union of cells over all profiles in key order; columns are
// researchers in input order. CSV layers: "share" (percent), "top" (1 marks a
// top cell), then "n_articles" and "mean_citations" footers.
std::string emit_profile_matrix(std::span<const ResearcherProfile> profiles, const ReportSpec& spec);

// Record listing followed by the per-(dimension, metric) block. In CSV the
// two tables are separated by one blank line, each with its own header.
std::string emit_difference_summary(std::span<const DifferenceRecord> records,
                                    std::span<const DimensionSummary> summaries, const ReportSpec& spec);

// Reads a reference table in the emitted CSV layout. Blank CSS columns are
// kept as NaN so tables carrying only e and T can be loaded.
ReferenceTable parse_reference_table(std::string_view csv_text);

}  // namespace pcells

#endif
