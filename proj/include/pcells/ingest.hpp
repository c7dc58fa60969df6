#ifndef PCELLS_INGEST_HPP
#define PCELLS_INGEST_HPP

#include "pcells/corpus.hpp"
#include "pcells/error.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcells {

enum class DataFormat { Csv, Jsonl };

// Row-level problem found during ingestion. In lenient mode these are
// collected and the row is skipped.
struct Rejection {
    std::size_t line = 0;
    ErrorCode code = ErrorCode::RowParseError;
    std::string subject;
    std::string reason;
};

struct IngestResult {
    Corpus corpus;
    std::vector<Rejection> rejected;
};

struct IngestOptions {
    DataFormat format = DataFormat::Csv;
    // Abort with pcells::Error on the first bad row instead of skipping it.
    bool strict = false;
    // When set, rows using codes outside the registry are rejected
    // (UnknownCategory). Otherwise a registry is derived from the data with
    // each code doubling as its own name.
    std::optional<std::vector<SubjectCategory>> registry;
};

inline constexpr std::string_view publications_csv_header = "pub_id,year,doc_type,categories,citations,authors";
inline constexpr std::string_view categories_csv_header = "code,name";

IngestResult parse_publications(std::string_view input, const IngestOptions& options = {});

// `code,name` CSV. Throws on malformed rows, invalid or duplicate codes, and
// on two codes sharing one name.
std::vector<SubjectCategory> parse_category_registry(std::string_view input);

std::string serialize_publications(const Corpus& corpus, DataFormat format);
std::string serialize_category_registry(std::span<const SubjectCategory> registry);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// 64-bit FNV-1a over raw bytes, rendered as 16 lowercase hex digits.
std::string content_digest(std::string_view bytes);

}  // namespace pcells

#endif
