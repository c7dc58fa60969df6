#include "pcells/ingest.hpp"

#include "csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pcells {

namespace {

using nlohmann::json;

template <typename Int>
Int parse_int(std::string_view text, std::string_view what)
{
    const auto first = text.find_first_not_of(' ');
    const auto last = text.find_last_not_of(' ');
    if (first == std::string_view::npos) {
        throw Error(ErrorCode::RowParseError, std::string(what) + " is empty");
    }
    text = text.substr(first, last - first + 1);
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::RowParseError, std::string(what) + " '" + std::string(text) + "' is not an integer");
    }
    return value;
}

std::vector<std::string> split_list(std::string_view text, char sep)
{
    std::vector<std::string> out;
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto end = text.find(sep, start);
        auto item = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        out.emplace_back(a == std::string_view::npos ? std::string_view{} : item.substr(a, b - a + 1));
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return out;
}

std::vector<std::string> parse_categories(std::vector<std::string> codes)
{
    if (codes.empty()) {
        throw Error(ErrorCode::EmptyCategorySet, "category set is empty");
    }
    return CellKey::from_codes(codes).codes();
}

std::vector<std::string> parse_authors(std::vector<std::string> ids)
{
    std::erase_if(ids, [](const auto& id) { return id.empty(); });
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

void add_citation(std::map<int, std::int64_t>& citations, int year, std::int64_t count)
{
    if (count < 0) {
        throw Error(ErrorCode::RowParseError, "negative citation count for year " + std::to_string(year));
    }
    if (!citations.emplace(year, count).second) {
        throw Error(ErrorCode::RowParseError, "citation year " + std::to_string(year) + " listed twice");
    }
}

std::map<int, std::int64_t> parse_citation_list(std::string_view text)
{
    std::map<int, std::int64_t> citations;
    for (const auto& entry : split_list(text, '|')) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::RowParseError, "citation entry '" + entry + "' is not YYYY:count");
        }
        add_citation(citations,
                     parse_int<int>(std::string_view(entry).substr(0, colon), "citation year"),
                     parse_int<std::int64_t>(std::string_view(entry).substr(colon + 1), "citation count"));
    }
    return citations;
}

PublicationRecord parse_csv_row(const csv::Record& row)
{
    if (row.fields.size() != 6) {
        throw Error(ErrorCode::RowParseError,
                    "expected 6 fields, found " + std::to_string(row.fields.size()));
    }
    PublicationRecord pub;
    pub.pub_id = row.fields[0];
    if (pub.pub_id.empty()) {
        throw Error(ErrorCode::RowParseError, "pub_id is empty");
    }
    pub.year = parse_int<int>(row.fields[1], "year");
    pub.doc_type = normalize_doc_type(row.fields[2]);
    pub.categories = parse_categories(split_list(row.fields[3], ';'));
    pub.citations_by_year = parse_citation_list(row.fields[4]);
    pub.author_ids = parse_authors(split_list(row.fields[5], ';'));
    return pub;
}

std::vector<std::string> json_list(const json& value, std::string_view field)
{
    if (value.is_string()) {
        return split_list(value.get<std::string>(), ';');
    }
    if (value.is_array()) {
        std::vector<std::string> out;
        for (const auto& item : value) {
            if (!item.is_string()) {
                throw Error(ErrorCode::RowParseError, std::string(field) + " entries must be strings");
            }
            out.push_back(item.get<std::string>());
        }
        return out;
    }
    if (value.is_null()) {
        return {};
    }
    throw Error(ErrorCode::RowParseError, std::string(field) + " must be a list or a ';'-joined string");
}

PublicationRecord parse_json_row(std::string_view line)
{
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::RowParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
        throw Error(ErrorCode::RowParseError, "line is not a JSON object");
    }
    for (const auto* key : {"pub_id", "year", "doc_type", "categories"}) {
        if (!obj.contains(key)) {
            throw Error(ErrorCode::RowParseError, std::string("missing field '") + key + "'");
        }
    }
    PublicationRecord pub;
    try {
        pub.pub_id = obj.at("pub_id").get<std::string>();
        pub.year = obj.at("year").get<int>();
        pub.doc_type = normalize_doc_type(obj.at("doc_type").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::RowParseError, std::string("bad field type: ") + e.what());
    }
    if (pub.pub_id.empty()) {
        throw Error(ErrorCode::RowParseError, "pub_id is empty");
    }
    pub.categories = parse_categories(json_list(obj.at("categories"), "categories"));
    if (obj.contains("citations") && !obj.at("citations").is_null()) {
        const auto& cites = obj.at("citations");
        if (cites.is_string()) {
            pub.citations_by_year = parse_citation_list(cites.get<std::string>());
        } else if (cites.is_object()) {
            for (const auto& [year, count] : cites.items()) {
                if (!count.is_number_integer()) {
                    throw Error(ErrorCode::RowParseError, "citation count for " + year + " is not an integer");
                }
                add_citation(pub.citations_by_year, parse_int<int>(year, "citation year"),
                             count.get<std::int64_t>());
            }
        } else {
            throw Error(ErrorCode::RowParseError, "citations must be a year -> count object");
        }
    }
    if (obj.contains("authors")) {
        pub.author_ids = parse_authors(json_list(obj.at("authors"), "authors"));
    }
    return pub;
}

// Line-oriented view of a JSONL stream: skips blank lines and records the
// 1-based line number of each object.
std::vector<std::pair<std::size_t, std::string_view>> jsonl_lines(std::string_view input)
{
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    if (input.starts_with("\xEF\xBB\xBF")) {
        input.remove_prefix(3);
    }
    std::size_t start = 0;
    std::size_t number = 1;
    while (start < input.size()) {
        auto end = input.find('\n', start);
        if (end == std::string_view::npos) {
            end = input.size();
        }
        auto line = input.substr(start, end - start);
        if (line.ends_with('\r')) {
            line.remove_suffix(1);
        }
        if (line.find_first_not_of(" \t") != std::string_view::npos) {
            lines.emplace_back(number, line);
        }
        start = end + 1;
        ++number;
    }
    return lines;
}

class Collector {
public:
    explicit Collector(const IngestOptions& options) : options_(options)
    {
        if (options_.registry) {
            for (const auto& cat : *options_.registry) {
                known_.insert(cat.code);
            }
        }
    }

    void reject(std::size_t line, ErrorCode code, std::string subject, std::string reason)
    {
        if (options_.strict) {
            throw Error(code, "line " + std::to_string(line) + ": " + reason, std::move(subject), line);
        }
        rejected_.push_back({line, code, std::move(subject), std::move(reason)});
    }

    void accept(std::size_t line, PublicationRecord pub)
    {
        if (!pub.citations_by_year.empty() && pub.citations_by_year.begin()->first < pub.year) {
            reject(line, ErrorCode::TemporalViolation, pub.pub_id,
                   "publication '" + pub.pub_id + "' has citations dated before " + std::to_string(pub.year));
            return;
        }
        if (options_.registry) {
            for (const auto& code : pub.categories) {
                if (!known_.contains(code)) {
                    reject(line, ErrorCode::UnknownCategory, code,
                           "category '" + code + "' is not in the registry");
                    return;
                }
            }
        }
        if (!ids_.insert(pub.pub_id).second) {
            reject(line, ErrorCode::DuplicateId, pub.pub_id, "duplicate pub_id '" + pub.pub_id + "'");
            return;
        }
        pubs_.push_back(std::move(pub));
    }

    template <typename Parse>
    void row(std::size_t line, Parse&& parse)
    {
        PublicationRecord pub;
        try {
            pub = parse();
        } catch (const Error& e) {
            reject(line, e.code(), e.subject(), e.what());
            return;
        }
        accept(line, std::move(pub));
    }

    IngestResult finish()
    {
        std::vector<SubjectCategory> registry;
        if (options_.registry) {
            registry = *options_.registry;
        } else {
            std::set<std::string> codes;
            for (const auto& pub : pubs_) {
                codes.insert(pub.categories.begin(), pub.categories.end());
            }
            for (const auto& code : codes) {
                registry.push_back({code, code});
            }
        }
        return {Corpus(std::move(pubs_), std::move(registry)), std::move(rejected_)};
    }

private:
    const IngestOptions& options_;
    std::set<std::string> known_;
    std::set<std::string> ids_;
    std::vector<PublicationRecord> pubs_;
    std::vector<Rejection> rejected_;
};

std::string join(const std::vector<std::string>& items, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

}  // namespace

IngestResult parse_publications(std::string_view input, const IngestOptions& options)
{
    if (!csv::is_valid_utf8(input)) {
        throw Error(ErrorCode::RowParseError, "input is not valid UTF-8");
    }
    Collector collector(options);

    if (options.format == DataFormat::Jsonl) {
        for (const auto& [line, text] : jsonl_lines(input)) {
            collector.row(line, [&] { return parse_json_row(text); });
        }
        return collector.finish();
    }

    csv::Reader reader(input);
    std::optional<csv::Record> header;
    try {
        header = reader.next();
    } catch (const Error& e) {
        throw Error(ErrorCode::RowParseError, "unreadable header", {}, e.line());
    }
    if (!header) {
        throw Error(ErrorCode::RowParseError, "publications CSV has no header row", {}, 1);
    }
    std::string header_text;
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        header_text += (i ? "," : "") + header->fields[i];
    }
    if (header_text != publications_csv_header) {
        throw Error(ErrorCode::RowParseError,
                    "unexpected header '" + header_text + "', expected '" + std::string(publications_csv_header) + "'",
                    {}, header->line);
    }
    while (true) {
        std::optional<csv::Record> row;
        try {
            row = reader.next();
        } catch (const Error& e) {
            // An unterminated quote swallows the rest of the stream.
            collector.reject(e.line(), ErrorCode::RowParseError, {}, e.what());
            break;
        }
        if (!row) {
            break;
        }
        collector.row(row->line, [&] { return parse_csv_row(*row); });
    }
    return collector.finish();
}

std::vector<SubjectCategory> parse_category_registry(std::string_view input)
{
    if (!csv::is_valid_utf8(input)) {
        throw Error(ErrorCode::RowParseError, "category registry is not valid UTF-8");
    }
    csv::Reader reader(input);
    auto header = reader.next();
    if (!header || header->fields != std::vector<std::string>{"code", "name"}) {
        throw Error(ErrorCode::RowParseError, "category registry must start with header 'code,name'", {}, 1);
    }
    std::vector<SubjectCategory> registry;
    std::map<std::string, std::string> name_owner;
    std::set<std::string> codes;
    while (auto row = reader.next()) {
        if (row->fields.size() != 2) {
            throw Error(ErrorCode::RowParseError,
                        "line " + std::to_string(row->line) + ": expected 2 fields", {}, row->line);
        }
        SubjectCategory cat{row->fields[0], row->fields[1]};
        if (!is_valid_category_code(cat.code)) {
            throw Error(ErrorCode::InvalidCategoryCode,
                        "line " + std::to_string(row->line) + ": invalid category code '" + cat.code + "'",
                        cat.code, row->line);
        }
        if (!codes.insert(cat.code).second) {
            throw Error(ErrorCode::DuplicateId,
                        "line " + std::to_string(row->line) + ": category '" + cat.code + "' listed twice",
                        cat.code, row->line);
        }
        auto [it, fresh] = name_owner.emplace(cat.name, cat.code);
        if (!fresh) {
            throw Error(ErrorCode::InvalidArgument,
                        "line " + std::to_string(row->line) + ": name '" + cat.name + "' already used by '" +
                            it->second + "'",
                        cat.code, row->line);
        }
        registry.push_back(std::move(cat));
    }
    return registry;
}

std::string serialize_publications(const Corpus& corpus, DataFormat format)
{
    std::string out;
    if (format == DataFormat::Jsonl) {
        for (const auto& pub : corpus.publications()) {
            nlohmann::ordered_json obj;
            obj["pub_id"] = pub.pub_id;
            obj["year"] = pub.year;
            obj["doc_type"] = pub.doc_type;
            obj["categories"] = pub.categories;
            auto cites = nlohmann::ordered_json::object();
            for (const auto& [year, count] : pub.citations_by_year) {
                cites[std::to_string(year)] = count;
            }
            obj["citations"] = std::move(cites);
            obj["authors"] = pub.author_ids;
            out += obj.dump();
            out += '\n';
        }
        return out;
    }
    out += publications_csv_header;
    out += '\n';
    for (const auto& pub : corpus.publications()) {
        std::string cites;
        for (const auto& [year, count] : pub.citations_by_year) {
            if (!cites.empty()) {
                cites += '|';
            }
            cites += std::to_string(year) + ':' + std::to_string(count);
        }
        csv::append_row(out, {pub.pub_id, std::to_string(pub.year), pub.doc_type, join(pub.categories, ';'),
                              cites, join(pub.author_ids, ';')});
    }
    return out;
}

std::string serialize_category_registry(std::span<const SubjectCategory> registry)
{
    std::string out(categories_csv_header);
    out += '\n';
    for (const auto& cat : registry) {
        csv::append_row(out, {cat.code, cat.name});
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading", path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "failed reading '" + path.string() + "'", path.string());
    }
    return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing", path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'", path.string());
    }
}

std::string content_digest(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace pcells
