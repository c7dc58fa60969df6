#ifndef PCELLS_CORPUS_HPP
#define PCELLS_CORPUS_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcells {

struct SubjectCategory {
    std::string code;
    std::string name;

    bool operator==(const SubjectCategory&) const = default;
};

// A code is usable as a cell component when it is non-empty and holds
// neither the list separator ';' nor whitespace.
bool is_valid_category_code(std::string_view code);

/// Canonical form of an exact subject-category combination: codes strictly
/// ascending, no duplicates, never empty. Ordering and equality follow the
/// textual form ("AA;PPF").
class CellKey {
public:
    CellKey() = default;

    // Sorts and de-duplicates. Throws EmptyCategorySet / InvalidCategoryCode.
    static CellKey from_codes(std::span<const std::string> codes);
    static CellKey from_codes(std::initializer_list<std::string_view> codes);
    // Parses the textual form; input order and duplicates are tolerated.
    static CellKey parse(std::string_view text);

    const std::vector<std::string>& codes() const noexcept { return codes_; }
    const std::string& str() const noexcept { return text_; }
    std::size_t size() const noexcept { return codes_.size(); }
    bool empty() const noexcept { return codes_.empty(); }
    bool contains(std::string_view code) const;

    friend bool operator==(const CellKey& a, const CellKey& b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(const CellKey& a, const CellKey& b) { return a.text_ <=> b.text_; }

private:
    std::vector<std::string> codes_;
    std::string text_;
};

CellKey canonical_cell_key(std::span<const std::string> categories);

struct PublicationRecord {
    std::string pub_id;
    int year = 0;
    std::string doc_type;
    std::vector<std::string> categories;      // sorted, unique
    std::map<int, std::int64_t> citations_by_year;
    std::vector<std::string> author_ids;      // sorted, unique

    CellKey cell() const { return CellKey::from_codes(categories); }

    bool operator==(const PublicationRecord&) const = default;
};

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
    bool empty() const noexcept { return last < first; }
    bool operator==(const YearRange&) const = default;
};

// Immutable once built; publications are kept in ascending pub_id order.
class Corpus {
public:
    Corpus() = default;
    // Validates the corpus invariants (unique ids, registry coverage,
    // temporal consistency). Throws pcells::Error on violation.
    Corpus(std::vector<PublicationRecord> publications, std::vector<SubjectCategory> registry);

    const std::vector<PublicationRecord>& publications() const noexcept { return publications_; }
    const std::vector<SubjectCategory>& categories() const noexcept { return registry_; }
    std::size_t size() const noexcept { return publications_.size(); }

    const PublicationRecord* find(std::string_view pub_id) const;
    const SubjectCategory* find_category(std::string_view code) const;
    // Sorted, unique researcher ids across every publication.
    std::vector<std::string> researchers() const;

    bool operator==(const Corpus&) const = default;

private:
    std::vector<PublicationRecord> publications_;
    std::vector<SubjectCategory> registry_;
};

class CellPartition {
public:
    using CellMap = std::map<CellKey, std::vector<std::string>>;

    CellPartition() = default;
    CellPartition(CellMap cells, std::string doc_type, YearRange years);

    const CellMap& cells() const noexcept { return cells_; }
    const std::vector<std::string>* members(const CellKey& key) const;
    // Cell of an admitted publication, or nullopt when it was filtered out.
    std::optional<CellKey> cell_of(std::string_view pub_id) const;
    std::size_t admitted() const noexcept { return by_id_.size(); }
    const std::string& doc_type() const noexcept { return doc_type_; }
    YearRange years() const noexcept { return years_; }

private:
    CellMap cells_;
    std::map<std::string, CellKey, std::less<>> by_id_;
    std::string doc_type_;
    YearRange years_;
};

// Lowercased, whitespace-trimmed document type token.
std::string normalize_doc_type(std::string_view token);

CellPartition build_partition(const Corpus& corpus, std::string_view doc_type, YearRange years);

struct AdjacentTriple {
    CellKey left;    // i only
    CellKey middle;  // i and j
    CellKey right;   // j only

    bool operator==(const AdjacentTriple&) const = default;
};

AdjacentTriple adjacent_triples(std::string_view i, std::string_view j);

// Generalized adjacency: every pair of populated cells sharing at least one
// category code, each pair listed once in key order.
std::vector<std::pair<CellKey, CellKey>> shared_category_pairs(const CellPartition& partition);

}  // namespace pcells

#endif
