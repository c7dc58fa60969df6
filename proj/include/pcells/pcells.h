/*
 * C interface of the pcells library: partition-cell citation reference
 * values, their sensitivity across years, windows and adjacent cells, and
 * researcher cell profiles.
 *
 * Every object is an opaque handle released with its *_free function.
 * Functions return a pcells_status; on failure pcells_last_error() holds a
 * message for the calling thread until its next library call. Strings
 * returned by accessors stay valid as long as the owning handle.
 */
#ifndef PCELLS_H
#define PCELLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PCELLS_BUILDING)
#    define PCELLS_API __declspec(dllexport)
#  else
#    define PCELLS_API __declspec(dllimport)
#  endif
#else
#  define PCELLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcells_status {
    PCELLS_OK = 0,
    PCELLS_ERR_INVALID_ARGUMENT,
    PCELLS_ERR_ROW_PARSE,
    PCELLS_ERR_DUPLICATE_ID,
    PCELLS_ERR_TEMPORAL_VIOLATION,
    PCELLS_ERR_EMPTY_CATEGORY_SET,
    PCELLS_ERR_INVALID_CATEGORY_CODE,
    PCELLS_ERR_UNKNOWN_CATEGORY,
    PCELLS_ERR_DEGENERATE_TRIPLE,
    PCELLS_ERR_INVALID_SPEC,
    PCELLS_ERR_EMPTY_DISTRIBUTION,
    PCELLS_ERR_MISSING_REFERENCE,
    PCELLS_ERR_ZERO_EXPECTATION,
    PCELLS_ERR_NON_POSITIVE_VALUE,
    PCELLS_ERR_MIXED_DIMENSIONS,
    PCELLS_ERR_EMPTY_PROFILE,
    PCELLS_ERR_EMPTY_REPORT,
    PCELLS_ERR_IO,
    PCELLS_ERR_INTERNAL
} pcells_status;

typedef enum pcells_data_format { PCELLS_DATA_CSV = 0, PCELLS_DATA_JSONL = 1 } pcells_data_format;
typedef enum pcells_report_format { PCELLS_REPORT_CSV = 0, PCELLS_REPORT_JSON = 1 } pcells_report_format;
typedef enum pcells_metric { PCELLS_METRIC_E = 0, PCELLS_METRIC_T = 1 } pcells_metric;
typedef enum pcells_dimension {
    PCELLS_DIM_PUBLICATION_YEAR = 0,
    PCELLS_DIM_WINDOW_LENGTH = 1,
    PCELLS_DIM_ADJACENT_CELL = 2
} pcells_dimension;

typedef struct pcells_corpus pcells_corpus;
typedef struct pcells_partition pcells_partition;
typedef struct pcells_reftable pcells_reftable;
typedef struct pcells_diffset pcells_diffset;
typedef struct pcells_profiles pcells_profiles;

PCELLS_API const char* pcells_version(void);
PCELLS_API const char* pcells_last_error(void);
PCELLS_API const char* pcells_status_name(pcells_status status);

/* FNV-1a 64 digest of a file's bytes as 16 hex digits plus NUL. */
PCELLS_API pcells_status pcells_digest_file(const char* path, char out_hex[17]);
PCELLS_API void pcells_string_free(char* text);

/* ---- corpus ---------------------------------------------------------- */

/* `cats_path` may be NULL; otherwise rows using unregistered codes are
 * rejected. With `strict` != 0 the first bad row fails the call. */
PCELLS_API pcells_status pcells_corpus_load(const char* pubs_path, const char* cats_path,
                                            pcells_data_format format, int strict, pcells_corpus** out);
PCELLS_API pcells_status pcells_corpus_parse(const char* data, size_t size, pcells_data_format format, int strict,
                                             pcells_corpus** out);
/* Generator spec is a JSON document. */
PCELLS_API pcells_status pcells_corpus_generate(const char* spec_json, size_t size, uint64_t seed,
                                                pcells_corpus** out);
PCELLS_API size_t pcells_corpus_size(const pcells_corpus* corpus);
PCELLS_API size_t pcells_corpus_rejected_count(const pcells_corpus* corpus);
/* One human-readable line per rejected row: "line N: Code: reason". */
PCELLS_API const char* pcells_corpus_rejected_message(const pcells_corpus* corpus, size_t index);
PCELLS_API size_t pcells_corpus_researcher_count(const pcells_corpus* corpus);
PCELLS_API const char* pcells_corpus_researcher(const pcells_corpus* corpus, size_t index);
PCELLS_API int pcells_corpus_has_category(const pcells_corpus* corpus, const char* code);
/* Writes publications (CSV or JSONL) and, when `cats_path` is non-NULL, the
 * category registry CSV. */
PCELLS_API pcells_status pcells_corpus_write(const pcells_corpus* corpus, const char* pubs_path,
                                             const char* cats_path, pcells_data_format format);
PCELLS_API void pcells_corpus_free(pcells_corpus* corpus);

/* ---- partition ------------------------------------------------------- */

PCELLS_API pcells_status pcells_partition_build(const pcells_corpus* corpus, const char* doc_type, int first_year,
                                                int last_year, pcells_partition** out);
PCELLS_API size_t pcells_partition_cell_count(const pcells_partition* partition);
PCELLS_API const char* pcells_partition_cell_key(const pcells_partition* partition, size_t index);
PCELLS_API size_t pcells_partition_cell_size(const pcells_partition* partition, size_t index);
PCELLS_API size_t pcells_partition_admitted(const pcells_partition* partition);
PCELLS_API void pcells_partition_free(pcells_partition* partition);

/* Canonical key text for a ';'-separated code list; free with pcells_string_free. */
PCELLS_API pcells_status pcells_canonical_key(const char* codes, char** out);

/* ---- reference values ------------------------------------------------ */

typedef struct pcells_reference_entry {
    const char* cell;
    int year;
    int window;
    size_t n;
    double e;
    double t;
    /* Up to three CSS scores; NaN where absent. */
    double css[3];
    int css_k;
} pcells_reference_entry;

PCELLS_API pcells_status pcells_reftable_build(const pcells_corpus* corpus, const pcells_partition* partition,
                                               const int* years, size_t year_count, const int* windows,
                                               size_t window_count, int css_k, pcells_reftable** out);
/* Loads a reference table CSV (the layout written by pcells_reftable_write). */
PCELLS_API pcells_status pcells_reftable_load(const char* path, pcells_reftable** out);
PCELLS_API size_t pcells_reftable_size(const pcells_reftable* table);
PCELLS_API pcells_status pcells_reftable_get(const pcells_reftable* table, size_t index,
                                             pcells_reference_entry* out);
PCELLS_API void pcells_reftable_free(pcells_reftable* table);

PCELLS_API pcells_status pcells_css_scores(const int64_t* counts, size_t size, int k, double* out_scores);
PCELLS_API pcells_status pcells_relative_difference(double x, double y, double* out);

/* ---- reports --------------------------------------------------------- */

typedef struct pcells_report_options {
    pcells_report_format format;
    /* Decimal places; negative selects the default (1, 0, 0, 1). */
    int value_decimals;
    int share_decimals;
    int mean_decimals;
    int percent_decimals;
    const char* input_digest;
    const char* const* param_keys;
    const char* const* param_values;
    size_t param_count;
} pcells_report_options;

PCELLS_API void pcells_report_options_init(pcells_report_options* options);

/* *_render return a NUL-terminated buffer freed with pcells_string_free;
 * *_write store the same bytes at `path`. */
PCELLS_API pcells_status pcells_reftable_render(const pcells_reftable* table, const pcells_report_options* options,
                                                char** out, size_t* size);
PCELLS_API pcells_status pcells_reftable_write(const pcells_reftable* table, const pcells_report_options* options,
                                               const char* path);

/* ---- comparisons ----------------------------------------------------- */

typedef struct pcells_compare_request {
    const int* year_pairs;   /* flattened (a, b) pairs */
    size_t year_pair_count;
    const int* window_pairs; /* flattened (a, b) pairs */
    size_t window_pair_count;
    const char* const* triples; /* flattened (i, j) category codes */
    size_t triple_count;
    const char* const* cells;   /* cells for the year and window dimensions */
    size_t cell_count;
    const int* years;           /* years for the window and cell dimensions */
    size_t year_count;
    const int* windows;         /* windows for the year and cell dimensions */
    size_t window_count;
} pcells_compare_request;

typedef struct pcells_difference {
    pcells_dimension dimension;
    pcells_metric metric;
    const char* left;
    const char* right;
    double x;
    double y;
    double r;
} pcells_difference;

typedef struct pcells_dimension_summary {
    pcells_dimension dimension;
    pcells_metric metric;
    size_t count;
    double min_r;
    double max_r;
} pcells_dimension_summary;

/* Runs all three dimensions for both metrics. Missing or non-positive pairs
 * are skipped and listed via pcells_diffset_skipped. Empty `cells` means the
 * cells of the triples (or every table cell when there are no triples);
 * empty `years` / `windows` mean every year / window in the table. */
PCELLS_API pcells_status pcells_compare(const pcells_reftable* table, const pcells_compare_request* request,
                                        pcells_diffset** out);
PCELLS_API size_t pcells_diffset_size(const pcells_diffset* set);
PCELLS_API pcells_status pcells_diffset_get(const pcells_diffset* set, size_t index, pcells_difference* out);
PCELLS_API size_t pcells_diffset_summary_count(const pcells_diffset* set);
PCELLS_API pcells_status pcells_diffset_summary(const pcells_diffset* set, size_t index,
                                                pcells_dimension_summary* out);
PCELLS_API size_t pcells_diffset_skipped_count(const pcells_diffset* set);
PCELLS_API const char* pcells_diffset_skipped(const pcells_diffset* set, size_t index);
PCELLS_API pcells_status pcells_diffset_render(const pcells_diffset* set, const pcells_report_options* options,
                                               char** out, size_t* size);
PCELLS_API pcells_status pcells_diffset_write(const pcells_diffset* set, const pcells_report_options* options,
                                              const char* path);
PCELLS_API void pcells_diffset_free(pcells_diffset* set);

/* ---- researcher profiles --------------------------------------------- */

typedef struct pcells_profile_summary {
    const char* researcher_id;
    size_t n_articles;
    double mean_citations;
    size_t cell_count;
    size_t top_cell_count;
} pcells_profile_summary;

/* `ids` may be empty (all researchers in the corpus). Unknown researchers
 * and researchers without admitted articles are omitted and listed via
 * pcells_profiles_warning; if nothing remains the call fails with
 * PCELLS_ERR_EMPTY_REPORT. */
PCELLS_API pcells_status pcells_profiles_build(const pcells_corpus* corpus, const pcells_partition* partition,
                                               const char* const* ids, size_t id_count, int first_year,
                                               int last_year, int window, pcells_profiles** out);
PCELLS_API size_t pcells_profiles_size(const pcells_profiles* profiles);
PCELLS_API pcells_status pcells_profiles_get(const pcells_profiles* profiles, size_t index,
                                             pcells_profile_summary* out);
/* Share (fraction) of one cell in one profile; 0 when absent. */
PCELLS_API double pcells_profiles_share(const pcells_profiles* profiles, size_t index, const char* cell);
PCELLS_API const char* pcells_profiles_top_cell(const pcells_profiles* profiles, size_t index, size_t top_index);
PCELLS_API size_t pcells_profiles_warning_count(const pcells_profiles* profiles);
PCELLS_API const char* pcells_profiles_warning(const pcells_profiles* profiles, size_t index);
PCELLS_API pcells_status pcells_profiles_render(const pcells_profiles* profiles,
                                                const pcells_report_options* options, char** out, size_t* size);
PCELLS_API pcells_status pcells_profiles_write(const pcells_profiles* profiles, const pcells_report_options* options,
                                               const char* path);
PCELLS_API void pcells_profiles_free(pcells_profiles* profiles);

#ifdef __cplusplus
}
#endif

#endif /* PCELLS_H */
