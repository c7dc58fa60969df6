#include "pcells/corpus.hpp"

#include "pcells/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pcells {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RowParseError: return "RowParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::TemporalViolation: return "TemporalViolation";
    case ErrorCode::EmptyCategorySet: return "EmptyCategorySet";
    case ErrorCode::InvalidCategoryCode: return "InvalidCategoryCode";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::ZeroExpectation: return "ZeroExpectation";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::EmptyProfile: return "EmptyProfile";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_valid_category_code(std::string_view code)
{
    if (code.empty()) {
        return false;
    }
    return std::none_of(code.begin(), code.end(), [](unsigned char c) {
        return c == ';' || std::isspace(c);
    });
}

CellKey CellKey::from_codes(std::span<const std::string> codes)
{
    if (codes.empty()) {
        throw Error(ErrorCode::EmptyCategorySet, "category set is empty");
    }
    CellKey key;
    key.codes_.assign(codes.begin(), codes.end());
    for (const auto& code : key.codes_) {
        if (!is_valid_category_code(code)) {
            throw Error(ErrorCode::InvalidCategoryCode, "invalid category code '" + code + "'", code);
        }
    }
    std::sort(key.codes_.begin(), key.codes_.end());
    key.codes_.erase(std::unique(key.codes_.begin(), key.codes_.end()), key.codes_.end());
    for (const auto& code : key.codes_) {
        if (!key.text_.empty()) {
            key.text_ += ';';
        }
        key.text_ += code;
    }
    return key;
}

CellKey CellKey::from_codes(std::initializer_list<std::string_view> codes)
{
    std::vector<std::string> owned(codes.begin(), codes.end());
    return from_codes(std::span<const std::string>(owned));
}

CellKey CellKey::parse(std::string_view text)
{
    std::vector<std::string> codes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(';', start), text.size());
        codes.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    if (codes.size() == 1 && codes.front().empty()) {
        codes.clear();
    }
    return from_codes(std::span<const std::string>(codes));
}

bool CellKey::contains(std::string_view code) const
{
    return std::binary_search(codes_.begin(), codes_.end(), code);
}

CellKey canonical_cell_key(std::span<const std::string> categories)
{
    return CellKey::from_codes(categories);
}

Corpus::Corpus(std::vector<PublicationRecord> publications, std::vector<SubjectCategory> registry)
    : publications_(std::move(publications)), registry_(std::move(registry))
{
    std::sort(registry_.begin(), registry_.end(),
              [](const auto& a, const auto& b) { return a.code < b.code; });
    for (std::size_t i = 0; i < registry_.size(); ++i) {
        if (!is_valid_category_code(registry_[i].code)) {
            throw Error(ErrorCode::InvalidCategoryCode,
                        "invalid category code '" + registry_[i].code + "'", registry_[i].code);
        }
        if (i > 0 && registry_[i].code == registry_[i - 1].code) {
            throw Error(ErrorCode::DuplicateId,
                        "category code '" + registry_[i].code + "' registered twice", registry_[i].code);
        }
    }

    std::sort(publications_.begin(), publications_.end(),
              [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
    for (std::size_t i = 0; i < publications_.size(); ++i) {
        auto& pub = publications_[i];
        if (i > 0 && pub.pub_id == publications_[i - 1].pub_id) {
            throw Error(ErrorCode::DuplicateId, "duplicate pub_id '" + pub.pub_id + "'", pub.pub_id);
        }
        if (!pub.citations_by_year.empty() && pub.citations_by_year.begin()->first < pub.year) {
            throw Error(ErrorCode::TemporalViolation,
                        "publication '" + pub.pub_id + "' has citations before its publication year",
                        pub.pub_id);
        }
        for (const auto& [year, count] : pub.citations_by_year) {
            if (count < 0) {
                throw Error(ErrorCode::InvalidArgument,
                            "publication '" + pub.pub_id + "' has a negative citation count", pub.pub_id);
            }
        }
        // Canonicalizes categories and validates codes in one go.
        pub.categories = pub.cell().codes();
        for (const auto& code : pub.categories) {
            if (find_category(code) == nullptr) {
                throw Error(ErrorCode::UnknownCategory,
                            "publication '" + pub.pub_id + "' uses unregistered category '" + code + "'",
                            code);
            }
        }
        std::sort(pub.author_ids.begin(), pub.author_ids.end());
        pub.author_ids.erase(std::unique(pub.author_ids.begin(), pub.author_ids.end()), pub.author_ids.end());
    }
}

const PublicationRecord* Corpus::find(std::string_view pub_id) const
{
    auto it = std::lower_bound(publications_.begin(), publications_.end(), pub_id,
                               [](const auto& pub, std::string_view id) { return pub.pub_id < id; });
    return it != publications_.end() && it->pub_id == pub_id ? &*it : nullptr;
}

const SubjectCategory* Corpus::find_category(std::string_view code) const
{
    auto it = std::lower_bound(registry_.begin(), registry_.end(), code,
                               [](const auto& cat, std::string_view c) { return cat.code < c; });
    return it != registry_.end() && it->code == code ? &*it : nullptr;
}

std::vector<std::string> Corpus::researchers() const
{
    std::set<std::string> ids;
    for (const auto& pub : publications_) {
        ids.insert(pub.author_ids.begin(), pub.author_ids.end());
    }
    return {ids.begin(), ids.end()};
}

CellPartition::CellPartition(CellMap cells, std::string doc_type, YearRange years)
    : cells_(std::move(cells)), doc_type_(std::move(doc_type)), years_(years)
{
    for (const auto& [key, ids] : cells_) {
        for (const auto& id : ids) {
            by_id_.emplace(id, key);
        }
    }
}

const std::vector<std::string>* CellPartition::members(const CellKey& key) const
{
    auto it = cells_.find(key);
    return it == cells_.end() ? nullptr : &it->second;
}

std::optional<CellKey> CellPartition::cell_of(std::string_view pub_id) const
{
    auto it = by_id_.find(pub_id);
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string normalize_doc_type(std::string_view token)
{
    auto first = token.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = token.find_last_not_of(" \t\r\n");
    std::string out(token.substr(first, last - first + 1));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

CellPartition build_partition(const Corpus& corpus, std::string_view doc_type, YearRange years)
{
    if (years.empty()) {
        throw Error(ErrorCode::InvalidArgument, "year range is empty");
    }
    const auto wanted = normalize_doc_type(doc_type);
    CellPartition::CellMap cells;
    // Publications are stored in pub_id order, so member lists come out sorted.
    for (const auto& pub : corpus.publications()) {
        if (pub.doc_type != wanted || !years.contains(pub.year) || pub.categories.empty()) {
            continue;
        }
        cells[pub.cell()].push_back(pub.pub_id);
    }
    return CellPartition(std::move(cells), wanted, years);
}

AdjacentTriple adjacent_triples(std::string_view i, std::string_view j)
{
    if (i == j) {
        throw Error(ErrorCode::DegenerateTriple, "adjacent triple needs two distinct categories",
                    std::string(i));
    }
    return {CellKey::from_codes({i}), CellKey::from_codes({i, j}), CellKey::from_codes({j})};
}

std::vector<std::pair<CellKey, CellKey>> shared_category_pairs(const CellPartition& partition)
{
    std::vector<std::pair<CellKey, CellKey>> pairs;
    const auto& cells = partition.cells();
    for (auto a = cells.begin(); a != cells.end(); ++a) {
        for (auto b = std::next(a); b != cells.end(); ++b) {
            const auto& left = a->first.codes();
            const bool shares = std::any_of(left.begin(), left.end(),
                                            [&](const auto& code) { return b->first.contains(code); });
            if (shares) {
                pairs.emplace_back(a->first, b->first);
            }
        }
    }
    return pairs;
}

}  // namespace pcells
