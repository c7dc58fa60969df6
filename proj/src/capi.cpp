#include "pcells/pcells.h"

#include "pcells/compare.hpp"
#include "pcells/corpus.hpp"
#include "pcells/error.hpp"
#include "pcells/ingest.hpp"
#include "pcells/profile.hpp"
#include "pcells/reference.hpp"
#include "pcells/report.hpp"
#include "pcells/synthetic.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <set>
#include <string>
#include <vector>

struct pcells_corpus {
    pcells::Corpus corpus;
    std::vector<std::string> rejected;
    std::vector<std::string> researchers;
};

struct pcells_partition {
    pcells::CellPartition partition;
    std::vector<std::string> keys;
    std::vector<std::size_t> sizes;
};

struct pcells_reftable {
    pcells::ReferenceTable table;
};

struct pcells_diffset {
    std::vector<pcells::DifferenceRecord> records;
    std::vector<pcells::DimensionSummary> summaries;
    std::vector<std::string> skipped;
};

struct pcells_profiles {
    std::vector<pcells::ResearcherProfile> profiles;
    std::vector<std::vector<std::string>> top_cells;
    std::vector<std::string> warnings;
};

namespace {

thread_local std::string last_error;

pcells_status to_status(pcells::ErrorCode code)
{
    using pcells::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return PCELLS_ERR_INVALID_ARGUMENT;
    case ErrorCode::RowParseError: return PCELLS_ERR_ROW_PARSE;
    case ErrorCode::DuplicateId: return PCELLS_ERR_DUPLICATE_ID;
    case ErrorCode::TemporalViolation: return PCELLS_ERR_TEMPORAL_VIOLATION;
    case ErrorCode::EmptyCategorySet: return PCELLS_ERR_EMPTY_CATEGORY_SET;
    case ErrorCode::InvalidCategoryCode: return PCELLS_ERR_INVALID_CATEGORY_CODE;
    case ErrorCode::UnknownCategory: return PCELLS_ERR_UNKNOWN_CATEGORY;
    case ErrorCode::DegenerateTriple: return PCELLS_ERR_DEGENERATE_TRIPLE;
    case ErrorCode::InvalidSpec: return PCELLS_ERR_INVALID_SPEC;
    case ErrorCode::EmptyDistribution: return PCELLS_ERR_EMPTY_DISTRIBUTION;
    case ErrorCode::MissingReference: return PCELLS_ERR_MISSING_REFERENCE;
    case ErrorCode::ZeroExpectation: return PCELLS_ERR_ZERO_EXPECTATION;
    case ErrorCode::NonPositiveValue: return PCELLS_ERR_NON_POSITIVE_VALUE;
    case ErrorCode::MixedDimensions: return PCELLS_ERR_MIXED_DIMENSIONS;
    case ErrorCode::EmptyProfile: return PCELLS_ERR_EMPTY_PROFILE;
    case ErrorCode::EmptyReport: return PCELLS_ERR_EMPTY_REPORT;
    case ErrorCode::IoError: return PCELLS_ERR_IO;
    }
    return PCELLS_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes and the thread's
// last error message.
template <typename Body>
pcells_status guarded(Body&& body)
{
    last_error.clear();
    try {
        body();
        return PCELLS_OK;
    } catch (const pcells::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return PCELLS_ERR_INTERNAL;
}

void require(bool condition, const char* what)
{
    if (!condition) {
        throw pcells::Error(pcells::ErrorCode::InvalidArgument, what);
    }
}

char* copy_out(const std::string& text, std::size_t* size)
{
    auto* buffer = static_cast<char*>(std::malloc(text.size() + 1));
    if (buffer == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(buffer, text.data(), text.size());
    buffer[text.size()] = '\0';
    if (size != nullptr) {
        *size = text.size();
    }
    return buffer;
}

pcells_corpus* wrap(pcells::IngestResult result)
{
    auto handle = std::make_unique<pcells_corpus>();
    handle->corpus = std::move(result.corpus);
    for (const auto& r : result.rejected) {
        handle->rejected.push_back("line " + std::to_string(r.line) + ": " + std::string(pcells::to_string(r.code)) +
                                   ": " + r.reason);
    }
    handle->researchers = handle->corpus.researchers();
    return handle.release();
}

pcells::ReportSpec to_spec(const pcells_report_options* options)
{
    pcells::ReportSpec spec;
    if (options == nullptr) {
        return spec;
    }
    spec.format = options->format == PCELLS_REPORT_JSON ? pcells::ReportFormat::Json : pcells::ReportFormat::Csv;
    if (options->value_decimals >= 0) {
        spec.rounding.values = options->value_decimals;
    }
    if (options->share_decimals >= 0) {
        spec.rounding.shares = options->share_decimals;
    }
    if (options->mean_decimals >= 0) {
        spec.rounding.means = options->mean_decimals;
    }
    if (options->percent_decimals >= 0) {
        spec.rounding.percents = options->percent_decimals;
    }
    if (options->input_digest != nullptr) {
        spec.metadata.input_digest = options->input_digest;
    }
    require(options->param_count == 0 || (options->param_keys != nullptr && options->param_values != nullptr),
            "report parameters are missing");
    for (std::size_t i = 0; i < options->param_count; ++i) {
        require(options->param_keys[i] != nullptr && options->param_values[i] != nullptr, "null report parameter");
        spec.metadata.parameters.emplace_back(options->param_keys[i], options->param_values[i]);
    }
    return spec;
}

template <typename Render>
pcells_status render_to(Render&& render, char** out, size_t* size)
{
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        *out = copy_out(render(), size);
    });
}

template <typename Render>
pcells_status write_to(Render&& render, const char* path)
{
    return guarded([&] {
        require(path != nullptr, "path is null");
        pcells::write_file(path, render());
    });
}

pcells_dimension to_c(pcells::Dimension d)
{
    switch (d) {
    case pcells::Dimension::PublicationYear: return PCELLS_DIM_PUBLICATION_YEAR;
    case pcells::Dimension::WindowLength: return PCELLS_DIM_WINDOW_LENGTH;
    case pcells::Dimension::AdjacentCell: return PCELLS_DIM_ADJACENT_CELL;
    }
    return PCELLS_DIM_PUBLICATION_YEAR;
}

pcells_metric to_c(pcells::Metric m)
{
    return m == pcells::Metric::E ? PCELLS_METRIC_E : PCELLS_METRIC_T;
}

}  // namespace

extern "C" {

const char* pcells_version(void)
{
    static const std::string version(pcells::toolkit_version());
    return version.c_str();
}

const char* pcells_last_error(void)
{
    return last_error.c_str();
}

const char* pcells_status_name(pcells_status status)
{
    switch (status) {
    case PCELLS_OK: return "Ok";
    case PCELLS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case PCELLS_ERR_ROW_PARSE: return "RowParseError";
    case PCELLS_ERR_DUPLICATE_ID: return "DuplicateId";
    case PCELLS_ERR_TEMPORAL_VIOLATION: return "TemporalViolation";
    case PCELLS_ERR_EMPTY_CATEGORY_SET: return "EmptyCategorySet";
    case PCELLS_ERR_INVALID_CATEGORY_CODE: return "InvalidCategoryCode";
    case PCELLS_ERR_UNKNOWN_CATEGORY: return "UnknownCategory";
    case PCELLS_ERR_DEGENERATE_TRIPLE: return "DegenerateTriple";
    case PCELLS_ERR_INVALID_SPEC: return "InvalidSpec";
    case PCELLS_ERR_EMPTY_DISTRIBUTION: return "EmptyDistribution";
    case PCELLS_ERR_MISSING_REFERENCE: return "MissingReference";
    case PCELLS_ERR_ZERO_EXPECTATION: return "ZeroExpectation";
    case PCELLS_ERR_NON_POSITIVE_VALUE: return "NonPositiveValue";
    case PCELLS_ERR_MIXED_DIMENSIONS: return "MixedDimensions";
    case PCELLS_ERR_EMPTY_PROFILE: return "EmptyProfile";
    case PCELLS_ERR_EMPTY_REPORT: return "EmptyReport";
    case PCELLS_ERR_IO: return "IoError";
    case PCELLS_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

pcells_status pcells_digest_file(const char* path, char out_hex[17])
{
    return guarded([&] {
        require(path != nullptr && out_hex != nullptr, "null argument");
        const auto digest = pcells::content_digest(pcells::read_file(path));
        std::memcpy(out_hex, digest.c_str(), 17);
    });
}

void pcells_string_free(char* text)
{
    std::free(text);
}

pcells_status pcells_corpus_load(const char* pubs_path, const char* cats_path, pcells_data_format format,
                                 int strict, pcells_corpus** out)
{
    return guarded([&] {
        require(pubs_path != nullptr && out != nullptr, "null argument");
        pcells::IngestOptions options;
        options.format = format == PCELLS_DATA_JSONL ? pcells::DataFormat::Jsonl : pcells::DataFormat::Csv;
        options.strict = strict != 0;
        if (cats_path != nullptr) {
            options.registry = pcells::parse_category_registry(pcells::read_file(cats_path));
        }
        *out = wrap(pcells::parse_publications(pcells::read_file(pubs_path), options));
    });
}

pcells_status pcells_corpus_parse(const char* data, size_t size, pcells_data_format format, int strict,
                                  pcells_corpus** out)
{
    return guarded([&] {
        require((data != nullptr || size == 0) && out != nullptr, "null argument");
        pcells::IngestOptions options;
        options.format = format == PCELLS_DATA_JSONL ? pcells::DataFormat::Jsonl : pcells::DataFormat::Csv;
        options.strict = strict != 0;
        *out = wrap(pcells::parse_publications(std::string_view(data == nullptr ? "" : data, size), options));
    });
}

pcells_status pcells_corpus_generate(const char* spec_json, size_t size, uint64_t seed, pcells_corpus** out)
{
    return guarded([&] {
        require(spec_json != nullptr && out != nullptr, "null argument");
        const auto spec = pcells::parse_generator_spec(std::string_view(spec_json, size));
        *out = wrap({pcells::generate_synthetic_corpus(spec, seed), {}});
    });
}

size_t pcells_corpus_size(const pcells_corpus* corpus)
{
    return corpus == nullptr ? 0 : corpus->corpus.size();
}

size_t pcells_corpus_rejected_count(const pcells_corpus* corpus)
{
    return corpus == nullptr ? 0 : corpus->rejected.size();
}

const char* pcells_corpus_rejected_message(const pcells_corpus* corpus, size_t index)
{
    if (corpus == nullptr || index >= corpus->rejected.size()) {
        return nullptr;
    }
    return corpus->rejected[index].c_str();
}

size_t pcells_corpus_researcher_count(const pcells_corpus* corpus)
{
    return corpus == nullptr ? 0 : corpus->researchers.size();
}

const char* pcells_corpus_researcher(const pcells_corpus* corpus, size_t index)
{
    if (corpus == nullptr || index >= corpus->researchers.size()) {
        return nullptr;
    }
    return corpus->researchers[index].c_str();
}

int pcells_corpus_has_category(const pcells_corpus* corpus, const char* code)
{
    return corpus != nullptr && code != nullptr && corpus->corpus.find_category(code) != nullptr ? 1 : 0;
}

pcells_status pcells_corpus_write(const pcells_corpus* corpus, const char* pubs_path, const char* cats_path,
                                  pcells_data_format format)
{
    return guarded([&] {
        require(corpus != nullptr && pubs_path != nullptr, "null argument");
        const auto fmt = format == PCELLS_DATA_JSONL ? pcells::DataFormat::Jsonl : pcells::DataFormat::Csv;
        pcells::write_file(pubs_path, pcells::serialize_publications(corpus->corpus, fmt));
        if (cats_path != nullptr) {
            pcells::write_file(cats_path, pcells::serialize_category_registry(corpus->corpus.categories()));
        }
    });
}

void pcells_corpus_free(pcells_corpus* corpus)
{
    delete corpus;
}

pcells_status pcells_partition_build(const pcells_corpus* corpus, const char* doc_type, int first_year,
                                     int last_year, pcells_partition** out)
{
    return guarded([&] {
        require(corpus != nullptr && out != nullptr, "null argument");
        auto handle = std::make_unique<pcells_partition>();
        handle->partition = pcells::build_partition(corpus->corpus, doc_type == nullptr ? "article" : doc_type,
                                                    {first_year, last_year});
        for (const auto& [key, ids] : handle->partition.cells()) {
            handle->keys.push_back(key.str());
            handle->sizes.push_back(ids.size());
        }
        *out = handle.release();
    });
}

size_t pcells_partition_cell_count(const pcells_partition* partition)
{
    return partition == nullptr ? 0 : partition->keys.size();
}

const char* pcells_partition_cell_key(const pcells_partition* partition, size_t index)
{
    if (partition == nullptr || index >= partition->keys.size()) {
        return nullptr;
    }
    return partition->keys[index].c_str();
}

size_t pcells_partition_cell_size(const pcells_partition* partition, size_t index)
{
    if (partition == nullptr || index >= partition->sizes.size()) {
        return 0;
    }
    return partition->sizes[index];
}

size_t pcells_partition_admitted(const pcells_partition* partition)
{
    return partition == nullptr ? 0 : partition->partition.admitted();
}

void pcells_partition_free(pcells_partition* partition)
{
    delete partition;
}

pcells_status pcells_canonical_key(const char* codes, char** out)
{
    return guarded([&] {
        require(codes != nullptr && out != nullptr, "null argument");
        *out = copy_out(pcells::CellKey::parse(codes).str(), nullptr);
    });
}

pcells_status pcells_reftable_build(const pcells_corpus* corpus, const pcells_partition* partition,
                                    const int* years, size_t year_count, const int* windows, size_t window_count,
                                    int css_k, pcells_reftable** out)
{
    return guarded([&] {
        require(corpus != nullptr && partition != nullptr && out != nullptr, "null argument");
        require(years != nullptr && year_count > 0 && windows != nullptr && window_count > 0,
                "reference table needs years and windows");
        auto handle = std::make_unique<pcells_reftable>();
        handle->table = pcells::build_reference_table(partition->partition, corpus->corpus,
                                                      std::span<const int>(years, year_count),
                                                      std::span<const int>(windows, window_count), css_k);
        *out = handle.release();
    });
}

pcells_status pcells_reftable_load(const char* path, pcells_reftable** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto handle = std::make_unique<pcells_reftable>();
        handle->table = pcells::parse_reference_table(pcells::read_file(path));
        *out = handle.release();
    });
}

size_t pcells_reftable_size(const pcells_reftable* table)
{
    return table == nullptr ? 0 : table->table.size();
}

pcells_status pcells_reftable_get(const pcells_reftable* table, size_t index, pcells_reference_entry* out)
{
    return guarded([&] {
        require(table != nullptr && out != nullptr, "null argument");
        require(index < table->table.size(), "index out of range");
        const auto& entry = table->table.entries()[index];
        out->cell = entry.cell.str().c_str();
        out->year = entry.year;
        out->window = entry.window.years();
        out->n = entry.n;
        out->e = entry.e;
        out->t = entry.t;
        for (std::size_t i = 0; i < 3; ++i) {
            out->css[i] = i < entry.css.scores.size() ? entry.css.scores[i] : std::numeric_limits<double>::quiet_NaN();
        }
        out->css_k = entry.css.k();
    });
}

void pcells_reftable_free(pcells_reftable* table)
{
    delete table;
}

pcells_status pcells_css_scores(const int64_t* counts, size_t size, int k, double* out_scores)
{
    return guarded([&] {
        require((counts != nullptr || size == 0) && out_scores != nullptr, "null argument");
        const auto css = pcells::css_scores(std::span<const std::int64_t>(counts, size), k);
        std::copy(css.scores.begin(), css.scores.end(), out_scores);
    });
}

pcells_status pcells_relative_difference(double x, double y, double* out)
{
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = pcells::relative_difference(x, y);
    });
}

void pcells_report_options_init(pcells_report_options* options)
{
    if (options == nullptr) {
        return;
    }
    *options = pcells_report_options{};
    options->format = PCELLS_REPORT_CSV;
    options->value_decimals = -1;
    options->share_decimals = -1;
    options->mean_decimals = -1;
    options->percent_decimals = -1;
}

pcells_status pcells_reftable_render(const pcells_reftable* table, const pcells_report_options* options, char** out,
                                     size_t* size)
{
    return render_to(
        [&] {
            require(table != nullptr, "null table");
            return pcells::emit_reference_table(table->table, to_spec(options));
        },
        out, size);
}

pcells_status pcells_reftable_write(const pcells_reftable* table, const pcells_report_options* options,
                                    const char* path)
{
    return write_to(
        [&] {
            require(table != nullptr, "null table");
            return pcells::emit_reference_table(table->table, to_spec(options));
        },
        path);
}

pcells_status pcells_compare(const pcells_reftable* table, const pcells_compare_request* request,
                             pcells_diffset** out)
{
    return guarded([&] {
        require(table != nullptr && request != nullptr && out != nullptr, "null argument");
        const auto& r = *request;
        require(r.year_pair_count == 0 || r.year_pairs != nullptr, "year pairs missing");
        require(r.window_pair_count == 0 || r.window_pairs != nullptr, "window pairs missing");
        require(r.triple_count == 0 || r.triples != nullptr, "triples missing");
        require(r.cell_count == 0 || r.cells != nullptr, "cells missing");
        require(r.year_count == 0 || r.years != nullptr, "years missing");
        require(r.window_count == 0 || r.windows != nullptr, "windows missing");

        std::vector<std::pair<int, int>> year_pairs;
        for (std::size_t i = 0; i < r.year_pair_count; ++i) {
            year_pairs.emplace_back(r.year_pairs[2 * i], r.year_pairs[2 * i + 1]);
        }
        std::vector<std::pair<int, int>> window_pairs;
        for (std::size_t i = 0; i < r.window_pair_count; ++i) {
            window_pairs.emplace_back(r.window_pairs[2 * i], r.window_pairs[2 * i + 1]);
        }
        std::vector<pcells::AdjacentTriple> triples;
        for (std::size_t i = 0; i < r.triple_count; ++i) {
            require(r.triples[2 * i] != nullptr && r.triples[2 * i + 1] != nullptr, "null triple code");
            triples.push_back(pcells::adjacent_triples(r.triples[2 * i], r.triples[2 * i + 1]));
        }

        std::set<pcells::CellKey> table_cells;
        std::set<int> table_years;
        std::set<int> table_windows;
        for (const auto& entry : table->table.entries()) {
            table_cells.insert(entry.cell);
            table_years.insert(entry.year);
            table_windows.insert(entry.window.years());
        }

        std::vector<pcells::CellKey> cells;
        for (std::size_t i = 0; i < r.cell_count; ++i) {
            require(r.cells[i] != nullptr, "null cell");
            cells.push_back(pcells::CellKey::parse(r.cells[i]));
        }
        if (cells.empty()) {
            std::set<pcells::CellKey> chosen;
            for (const auto& t : triples) {
                chosen.insert({t.left, t.middle, t.right});
            }
            if (triples.empty()) {
                chosen = table_cells;
            }
            cells.assign(chosen.begin(), chosen.end());
        }
        std::vector<int> years(r.years, r.years + r.year_count);
        if (years.empty()) {
            years.assign(table_years.begin(), table_years.end());
        }
        std::vector<int> windows(r.windows, r.windows + r.window_count);
        if (windows.empty()) {
            windows.assign(table_windows.begin(), table_windows.end());
        }

        auto handle = std::make_unique<pcells_diffset>();
        auto absorb = [&](pcells::PairingResult result) {
            handle->records.insert(handle->records.end(), result.records.begin(), result.records.end());
            handle->skipped.insert(handle->skipped.end(), result.skipped.begin(), result.skipped.end());
        };
        for (const auto metric : {pcells::Metric::E, pcells::Metric::T}) {
            if (!year_pairs.empty()) {
                absorb(pcells::year_dimension_pairs(table->table, year_pairs, cells, windows, metric));
            }
            if (!window_pairs.empty()) {
                absorb(pcells::window_dimension_pairs(table->table, window_pairs, cells, years, metric));
            }
            if (!triples.empty()) {
                absorb(pcells::cell_dimension_pairs(table->table, triples, years, windows, metric));
            }
        }
        pcells::sort_records(handle->records);
        handle->summaries = pcells::summarize_all(handle->records);
        *out = handle.release();
    });
}

size_t pcells_diffset_size(const pcells_diffset* set)
{
    return set == nullptr ? 0 : set->records.size();
}

pcells_status pcells_diffset_get(const pcells_diffset* set, size_t index, pcells_difference* out)
{
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        require(index < set->records.size(), "index out of range");
        const auto& rec = set->records[index];
        *out = {to_c(rec.dimension), to_c(rec.metric), rec.left_label.c_str(), rec.right_label.c_str(),
                rec.x, rec.y, rec.r};
    });
}

size_t pcells_diffset_summary_count(const pcells_diffset* set)
{
    return set == nullptr ? 0 : set->summaries.size();
}

pcells_status pcells_diffset_summary(const pcells_diffset* set, size_t index, pcells_dimension_summary* out)
{
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        require(index < set->summaries.size(), "index out of range");
        const auto& s = set->summaries[index];
        *out = {to_c(s.dimension), to_c(s.metric), s.count, s.min_r, s.max_r};
    });
}

size_t pcells_diffset_skipped_count(const pcells_diffset* set)
{
    return set == nullptr ? 0 : set->skipped.size();
}

const char* pcells_diffset_skipped(const pcells_diffset* set, size_t index)
{
    if (set == nullptr || index >= set->skipped.size()) {
        return nullptr;
    }
    return set->skipped[index].c_str();
}

pcells_status pcells_diffset_render(const pcells_diffset* set, const pcells_report_options* options, char** out,
                                    size_t* size)
{
    return render_to(
        [&] {
            require(set != nullptr, "null difference set");
            return pcells::emit_difference_summary(set->records, set->summaries, to_spec(options));
        },
        out, size);
}

pcells_status pcells_diffset_write(const pcells_diffset* set, const pcells_report_options* options,
                                   const char* path)
{
    return write_to(
        [&] {
            require(set != nullptr, "null difference set");
            return pcells::emit_difference_summary(set->records, set->summaries, to_spec(options));
        },
        path);
}

void pcells_diffset_free(pcells_diffset* set)
{
    delete set;
}

pcells_status pcells_profiles_build(const pcells_corpus* corpus, const pcells_partition* partition,
                                    const char* const* ids, size_t id_count, int first_year, int last_year,
                                    int window, pcells_profiles** out)
{
    return guarded([&] {
        require(corpus != nullptr && partition != nullptr && out != nullptr, "null argument");
        require(id_count == 0 || ids != nullptr, "researcher ids missing");
        const pcells::YearRange period{first_year, last_year};
        require(!period.empty(), "profile period is empty");
        const pcells::CitationWindow citation_window(window);

        std::vector<std::string> wanted;
        for (std::size_t i = 0; i < id_count; ++i) {
            require(ids[i] != nullptr, "null researcher id");
            wanted.emplace_back(ids[i]);
        }
        if (wanted.empty()) {
            wanted = corpus->researchers;
        }
        const std::set<std::string> known(corpus->researchers.begin(), corpus->researchers.end());

        auto handle = std::make_unique<pcells_profiles>();
        for (const auto& id : wanted) {
            if (!known.contains(id)) {
                handle->warnings.push_back("unknown researcher '" + id + "' omitted");
                continue;
            }
            try {
                handle->profiles.push_back(pcells::researcher_profile(corpus->corpus, partition->partition, id,
                                                                      period, citation_window));
            } catch (const pcells::Error& e) {
                if (e.code() != pcells::ErrorCode::EmptyProfile) {
                    throw;
                }
                handle->warnings.push_back(std::string(e.what()) + "; omitted");
                continue;
            }
            auto& tops = handle->top_cells.emplace_back();
            for (const auto& cell : handle->profiles.back().top_cells) {
                tops.push_back(cell.str());
            }
        }
        if (handle->profiles.empty()) {
            last_error.clear();
            throw pcells::Error(pcells::ErrorCode::EmptyReport, "no requested researcher has a profile");
        }
        *out = handle.release();
    });
}

size_t pcells_profiles_size(const pcells_profiles* profiles)
{
    return profiles == nullptr ? 0 : profiles->profiles.size();
}

pcells_status pcells_profiles_get(const pcells_profiles* profiles, size_t index, pcells_profile_summary* out)
{
    return guarded([&] {
        require(profiles != nullptr && out != nullptr, "null argument");
        require(index < profiles->profiles.size(), "index out of range");
        const auto& p = profiles->profiles[index];
        *out = {p.researcher_id.c_str(), p.n_articles, p.mean_citations, p.shares.size(), p.top_cells.size()};
    });
}

double pcells_profiles_share(const pcells_profiles* profiles, size_t index, const char* cell)
{
    if (profiles == nullptr || cell == nullptr || index >= profiles->profiles.size()) {
        return 0.0;
    }
    try {
        const auto& shares = profiles->profiles[index].shares;
        auto it = shares.find(pcells::CellKey::parse(cell));
        return it == shares.end() ? 0.0 : it->second;
    } catch (const std::exception&) {
        return 0.0;
    }
}

const char* pcells_profiles_top_cell(const pcells_profiles* profiles, size_t index, size_t top_index)
{
    if (profiles == nullptr || index >= profiles->top_cells.size() || top_index >= profiles->top_cells[index].size()) {
        return nullptr;
    }
    return profiles->top_cells[index][top_index].c_str();
}

size_t pcells_profiles_warning_count(const pcells_profiles* profiles)
{
    return profiles == nullptr ? 0 : profiles->warnings.size();
}

const char* pcells_profiles_warning(const pcells_profiles* profiles, size_t index)
{
    if (profiles == nullptr || index >= profiles->warnings.size()) {
        return nullptr;
    }
    return profiles->warnings[index].c_str();
}

pcells_status pcells_profiles_render(const pcells_profiles* profiles, const pcells_report_options* options,
                                     char** out, size_t* size)
{
    return render_to(
        [&] {
            require(profiles != nullptr, "null profiles");
            return pcells::emit_profile_matrix(profiles->profiles, to_spec(options));
        },
        out, size);
}

pcells_status pcells_profiles_write(const pcells_profiles* profiles, const pcells_report_options* options,
                                    const char* path)
{
    return write_to(
        [&] {
            require(profiles != nullptr, "null profiles");
            return pcells::emit_profile_matrix(profiles->profiles, to_spec(options));
        },
        path);
}

void pcells_profiles_free(pcells_profiles* profiles)
{
    delete profiles;
}

}  // extern "C"
