// pcells command-line front end. Talks to the library only through pcells.h.

#include <pcells/pcells.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit : int { ExitOk = 0, ExitUsage = 1, ExitAnalysis = 2, ExitIo = 3 };

struct Failure {
    int exit_code;
    std::string message;
};

struct Options {
    std::string pubs;
    std::string cats;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string doc_type = "article";
    std::string years;
    std::vector<int> windows;
    int css_k = 3;
    bool strict = false;
    std::string triples = "M:MA,AA:PPF";
    std::string year_pairs;
    std::string window_pairs;
    std::string ref_table;
    std::string researchers;
    int window = 5;
    std::string spec;
    std::uint64_t seed = 1;
};

struct YearSpan {
    int first;
    int last;
};

void log(const std::string& message)
{
    std::cerr << "pcells: " << message << '\n';
}

[[noreturn]] void usage(const std::string& message)
{
    throw Failure{ExitUsage, message};
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

int to_int(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) {
            usage("malformed " + what + ": '" + text + "'");
        }
        return value;
    } catch (const std::logic_error&) {
        usage("malformed " + what + ": '" + text + "'");
    }
}

YearSpan parse_years(const std::string& text, YearSpan fallback)
{
    if (text.empty()) {
        return fallback;
    }
    const auto dash = text.find('-');
    if (dash == std::string::npos) {
        const int year = to_int(text, "--years");
        return {year, year};
    }
    const YearSpan span{to_int(text.substr(0, dash), "--years"), to_int(text.substr(dash + 1), "--years")};
    if (span.first > span.last) {
        usage("--years range " + text + " is empty");
    }
    return span;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text, const std::string& what)
{
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& item : split(text, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
            usage("malformed " + what + " entry '" + item + "' (expected a:b)");
        }
        pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    return pairs;
}

std::vector<int> int_pairs(const std::string& text, const std::string& what)
{
    std::vector<int> flat;
    for (const auto& [a, b] : parse_pairs(text, what)) {
        flat.push_back(to_int(a, what));
        flat.push_back(to_int(b, what));
    }
    return flat;
}

std::vector<int> consecutive_pairs(const std::vector<int>& values)
{
    std::vector<int> flat;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        flat.push_back(values[i]);
        flat.push_back(values[i + 1]);
    }
    return flat;
}

int exit_for(pcells_status status)
{
    switch (status) {
    case PCELLS_OK: return ExitOk;
    case PCELLS_ERR_IO: return ExitIo;
    case PCELLS_ERR_INVALID_ARGUMENT:
    case PCELLS_ERR_INVALID_SPEC:
    case PCELLS_ERR_DEGENERATE_TRIPLE: return ExitUsage;
    default: return ExitAnalysis;
    }
}

void check(pcells_status status, const std::string& context)
{
    if (status != PCELLS_OK) {
        throw Failure{exit_for(status),
                      context + ": " + pcells_status_name(status) + ": " + pcells_last_error()};
    }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using CorpusPtr = std::unique_ptr<pcells_corpus, Deleter<pcells_corpus, pcells_corpus_free>>;
using PartitionPtr = std::unique_ptr<pcells_partition, Deleter<pcells_partition, pcells_partition_free>>;
using TablePtr = std::unique_ptr<pcells_reftable, Deleter<pcells_reftable, pcells_reftable_free>>;
using DiffPtr = std::unique_ptr<pcells_diffset, Deleter<pcells_diffset, pcells_diffset_free>>;
using ProfilesPtr = std::unique_ptr<pcells_profiles, Deleter<pcells_profiles, pcells_profiles_free>>;

// Collects what the run manifest records.
class Run {
public:
    Run(std::string command, const Options& options) : command_(std::move(command)), options_(options) {}

    void param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }

    std::string input(const std::string& role, const std::string& path)
    {
        char hex[17] = {};
        check(pcells_digest_file(path.c_str(), hex), "reading " + path);
        inputs_.push_back({{"role", role}, {"path", path}, {"digest", hex}});
        return hex;
    }

    void warn(const std::string& message)
    {
        log("warning: " + message);
        warnings_.push_back(message);
    }

    fs::path output_path(const std::string& name) const { return fs::path(options_.out_dir) / name; }

    void output(const fs::path& path)
    {
        char hex[17] = {};
        check(pcells_digest_file(path.string().c_str(), hex), "reading back " + path.string());
        outputs_.push_back({{"path", path.filename().string()}, {"digest", hex}});
        log("wrote " + path.string());
    }

    // Report options borrow strings owned by this Run; keep it alive while in use.
    pcells_report_options report_options(const std::string& digest)
    {
        digest_ = digest;
        keys_.clear();
        values_.clear();
        for (const auto& [k, v] : params_) {
            keys_.push_back(k.c_str());
            values_.push_back(v.c_str());
        }
        pcells_report_options opts;
        pcells_report_options_init(&opts);
        opts.format = report_format();
        opts.input_digest = digest_.c_str();
        opts.param_keys = keys_.data();
        opts.param_values = values_.data();
        opts.param_count = keys_.size();
        return opts;
    }

    pcells_report_format report_format() const
    {
        return options_.format == "json" ? PCELLS_REPORT_JSON : PCELLS_REPORT_CSV;
    }

    std::string extension() const { return options_.format == "json" ? ".json" : ".csv"; }

    void write_manifest(int exit_code, const std::string& error) const
    {
        json manifest;
        manifest["command"] = command_;
        manifest["toolkit"] = "pcells";
        manifest["version"] = pcells_version();
        json params = json::object();
        for (const auto& [k, v] : params_) {
            params[k] = v;
        }
        manifest["parameters"] = params;
        manifest["inputs"] = inputs_;
        manifest["outputs"] = outputs_;
        manifest["warnings"] = warnings_;
        manifest["exit_code"] = exit_code;
        if (!error.empty()) {
            manifest["error"] = error;
        }
        const auto path = output_path(command_ + "_manifest.json");
        std::ofstream out(path, std::ios::binary);
        out << manifest.dump(2) << '\n';
        if (!out) {
            log("cannot write manifest " + path.string());
        }
    }

private:
    std::string command_;
    const Options& options_;
    std::vector<std::pair<std::string, std::string>> params_;
    json inputs_ = json::array();
    json outputs_ = json::array();
    json warnings_ = json::array();
    std::string digest_;
    std::vector<const char*> keys_;
    std::vector<const char*> values_;
};

std::string join(const std::vector<int>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + std::to_string(values[i]);
    }
    return out;
}

pcells_data_format data_format(const std::string& path)
{
    return fs::path(path).extension() == ".jsonl" ? PCELLS_DATA_JSONL : PCELLS_DATA_CSV;
}

void validate_common(const Options& o)
{
    if (o.format != "csv" && o.format != "json") {
        usage("--format must be csv or json");
    }
    if (o.css_k < 1) {
        usage("--css-k must be at least 1");
    }
    for (int w : o.windows) {
        if (w < 1) {
            usage("--windows entries must be at least 1");
        }
    }
}

// Loads the corpus, reporting rejected rows. Returns the publications digest.
std::string load_corpus(Run& run, const Options& o, CorpusPtr& corpus)
{
    if (o.pubs.empty()) {
        usage("--pubs is required");
    }
    run.param("pubs", fs::path(o.pubs).filename().string());
    run.param("strict", o.strict ? "true" : "false");
    const auto digest = run.input("publications", o.pubs);
    if (!o.cats.empty()) {
        run.input("categories", o.cats);
    }
    pcells_corpus* raw = nullptr;
    const auto status = pcells_corpus_load(o.pubs.c_str(), o.cats.empty() ? nullptr : o.cats.c_str(),
                                           data_format(o.pubs), o.strict ? 1 : 0, &raw);
    if (status != PCELLS_OK) {
        throw Failure{status == PCELLS_ERR_IO ? ExitIo : ExitAnalysis,
                      std::string("loading publications: ") + pcells_status_name(status) + ": " +
                          pcells_last_error()};
    }
    corpus.reset(raw);
    const auto rejected = pcells_corpus_rejected_count(raw);
    for (std::size_t i = 0; i < rejected; ++i) {
        run.warn(std::string("rejected ") + pcells_corpus_rejected_message(raw, i));
    }
    log("loaded " + std::to_string(pcells_corpus_size(raw)) + " publications, " + std::to_string(rejected) +
        " rejected");
    return digest;
}

PartitionPtr build_partition(const pcells_corpus* corpus, const Options& o, YearSpan years)
{
    pcells_partition* raw = nullptr;
    check(pcells_partition_build(corpus, o.doc_type.c_str(), years.first, years.last, &raw), "building partition");
    PartitionPtr partition(raw);
    if (pcells_partition_admitted(raw) == 0) {
        throw Failure{ExitAnalysis, "EmptyReport: no " + o.doc_type + " publications in " +
                                        std::to_string(years.first) + "-" + std::to_string(years.last)};
    }
    return partition;
}

std::vector<int> year_list(YearSpan span)
{
    std::vector<int> years;
    for (int y = span.first; y <= span.last; ++y) {
        years.push_back(y);
    }
    return years;
}

TablePtr compute_table(const pcells_corpus* corpus, const pcells_partition* partition, const std::vector<int>& years,
                       const std::vector<int>& windows, int k)
{
    pcells_reftable* raw = nullptr;
    check(pcells_reftable_build(corpus, partition, years.data(), years.size(), windows.data(), windows.size(), k,
                                &raw),
          "computing reference values");
    return TablePtr(raw);
}

template <typename Render>
void write_report(Run& run, const std::string& stem, Render&& render)
{
    fs::create_directories(run.output_path(""));
    const auto path = run.output_path(stem + run.extension());
    render(path.string());
    run.output(path);
}

const YearSpan reference_years{2005, 2007};
const YearSpan profile_years{2000, 2007};
const std::vector<int> default_windows{3, 4, 5};

void cmd_validate(Run& run, const Options& o)
{
    CorpusPtr corpus;
    load_corpus(run, o, corpus);
    const auto rejected = pcells_corpus_rejected_count(corpus.get());
    if (rejected > 0) {
        throw Failure{ExitAnalysis, std::to_string(rejected) + " row(s) rejected"};
    }
    log("ok");
}

void cmd_refvalues(Run& run, const Options& o)
{
    const auto span = parse_years(o.years, reference_years);
    const auto windows = o.windows.empty() ? default_windows : o.windows;
    CorpusPtr corpus;
    const auto digest = load_corpus(run, o, corpus);
    run.param("doc_type", o.doc_type);
    run.param("years", std::to_string(span.first) + "-" + std::to_string(span.last));
    run.param("windows", join(windows));
    run.param("css_k", std::to_string(o.css_k));
    const auto partition = build_partition(corpus.get(), o, span);
    const auto table = compute_table(corpus.get(), partition.get(), year_list(span), windows, o.css_k);
    auto opts = run.report_options(digest);
    write_report(run, "reference_values", [&](const std::string& path) {
        check(pcells_reftable_write(table.get(), &opts, path.c_str()), "writing reference values");
    });
}

std::set<std::string> table_codes(const pcells_reftable* table)
{
    std::set<std::string> codes;
    pcells_reference_entry entry;
    for (std::size_t i = 0; i < pcells_reftable_size(table); ++i) {
        check(pcells_reftable_get(table, i, &entry), "reading reference table");
        for (const auto& code : split(entry.cell, ';')) {
            codes.insert(code);
        }
    }
    return codes;
}

void cmd_compare(Run& run, const Options& o)
{
    const auto span = parse_years(o.years, reference_years);
    const auto windows = o.windows.empty() ? default_windows : o.windows;
    const auto years = year_list(span);

    const auto triple_pairs = parse_pairs(o.triples, "--triples");
    for (const auto& [i, j] : triple_pairs) {
        for (const auto& code : {i, j}) {
            char* key = nullptr;
            const auto status = pcells_canonical_key(code.c_str(), &key);
            pcells_string_free(key);
            if (status != PCELLS_OK || code.find(';') != std::string::npos) {
                usage("invalid category code '" + code + "' in --triples");
            }
        }
        if (i == j) {
            usage("--triples entry " + i + ":" + j + " needs two different categories");
        }
    }
    const auto year_pairs = o.year_pairs.empty() ? consecutive_pairs(years) : int_pairs(o.year_pairs, "--year-pairs");
    const auto window_pairs =
        o.window_pairs.empty() ? consecutive_pairs(windows) : int_pairs(o.window_pairs, "--window-pairs");
    for (std::size_t i = 0; i < window_pairs.size(); ++i) {
        if (window_pairs[i] < 1) {
            usage("--window-pairs entries must be at least 1");
        }
    }

    CorpusPtr corpus;
    TablePtr table;
    std::string digest;
    std::set<std::string> known;
    if (!o.ref_table.empty()) {
        run.param("ref_table", fs::path(o.ref_table).filename().string());
        digest = run.input("reference_table", o.ref_table);
        pcells_reftable* raw = nullptr;
        const auto status = pcells_reftable_load(o.ref_table.c_str(), &raw);
        if (status != PCELLS_OK) {
            throw Failure{status == PCELLS_ERR_IO ? ExitIo : ExitAnalysis,
                          std::string("loading reference table: ") + pcells_status_name(status) + ": " +
                              pcells_last_error()};
        }
        table.reset(raw);
        known = table_codes(raw);
    } else {
        digest = load_corpus(run, o, corpus);
        run.param("doc_type", o.doc_type);
        run.param("css_k", std::to_string(o.css_k));
    }
    for (const auto& [i, j] : triple_pairs) {
        for (const auto& code : {i, j}) {
            const bool present = corpus ? pcells_corpus_has_category(corpus.get(), code.c_str()) != 0
                                        : known.contains(code);
            if (!present) {
                usage("unknown category code '" + code + "' in --triples");
            }
        }
    }
    run.param("years", std::to_string(span.first) + "-" + std::to_string(span.last));
    run.param("windows", join(windows));
    run.param("triples", o.triples);
    run.param("year_pairs", o.year_pairs.empty() ? "consecutive" : o.year_pairs);
    run.param("window_pairs", o.window_pairs.empty() ? "consecutive" : o.window_pairs);

    if (!table) {
        std::set<int> all_windows(windows.begin(), windows.end());
        all_windows.insert(window_pairs.begin(), window_pairs.end());
        std::set<int> all_years(years.begin(), years.end());
        all_years.insert(year_pairs.begin(), year_pairs.end());
        const YearSpan partition_span{*all_years.begin(), *all_years.rbegin()};
        const auto partition = build_partition(corpus.get(), o, partition_span);
        table = compute_table(corpus.get(), partition.get(), {all_years.begin(), all_years.end()},
                              {all_windows.begin(), all_windows.end()}, o.css_k);
    }

    std::vector<const char*> triples;
    for (const auto& [i, j] : triple_pairs) {
        triples.push_back(i.c_str());
        triples.push_back(j.c_str());
    }
    pcells_compare_request request{};
    request.year_pairs = year_pairs.data();
    request.year_pair_count = year_pairs.size() / 2;
    request.window_pairs = window_pairs.data();
    request.window_pair_count = window_pairs.size() / 2;
    request.triples = triples.data();
    request.triple_count = triple_pairs.size();
    request.years = years.data();
    request.year_count = years.size();
    request.windows = windows.data();
    request.window_count = windows.size();

    pcells_diffset* raw = nullptr;
    check(pcells_compare(table.get(), &request, &raw), "comparing reference values");
    DiffPtr diffs(raw);
    for (std::size_t i = 0; i < pcells_diffset_skipped_count(raw); ++i) {
        run.warn(std::string("skipped ") + pcells_diffset_skipped(raw, i));
    }
    pcells_dimension_summary summary;
    for (std::size_t i = 0; i < pcells_diffset_summary_count(raw); ++i) {
        check(pcells_diffset_summary(raw, i, &summary), "reading summary");
        char line[160];
        static const char* const dimension_names[] = {"publication_year", "window_length", "adjacent_cell"};
        std::snprintf(line, sizeof line, "%s %s: %zu records, r %.1f%%-%.1f%%",
                      dimension_names[summary.dimension], summary.metric == PCELLS_METRIC_E ? "e" : "t",
                      summary.count, 100.0 * summary.min_r, 100.0 * summary.max_r);
        log(line);
    }
    auto opts = run.report_options(digest);
    write_report(run, "differences", [&](const std::string& path) {
        check(pcells_diffset_write(raw, &opts, path.c_str()), "writing differences");
    });
}

void cmd_profile(Run& run, const Options& o)
{
    const auto span = parse_years(o.years, profile_years);
    if (o.window < 1) {
        usage("--window must be at least 1");
    }
    CorpusPtr corpus;
    const auto digest = load_corpus(run, o, corpus);
    run.param("doc_type", o.doc_type);
    run.param("years", std::to_string(span.first) + "-" + std::to_string(span.last));
    run.param("window", std::to_string(o.window));
    run.param("researchers", o.researchers.empty() ? "all" : o.researchers);

    const auto ids = split(o.researchers, ',');
    std::vector<const char*> id_ptrs;
    for (const auto& id : ids) {
        id_ptrs.push_back(id.c_str());
    }
    pcells_partition* praw = nullptr;
    check(pcells_partition_build(corpus.get(), o.doc_type.c_str(), span.first, span.last, &praw), "building partition");
    PartitionPtr partition(praw);

    pcells_profiles* raw = nullptr;
    const auto status = pcells_profiles_build(corpus.get(), praw, id_ptrs.data(), id_ptrs.size(), span.first,
                                              span.last, o.window, &raw);
    if (status == PCELLS_ERR_EMPTY_REPORT) {
        throw Failure{ExitAnalysis, std::string("EmptyReport: ") + pcells_last_error()};
    }
    check(status, "building profiles");
    ProfilesPtr profiles(raw);
    for (std::size_t i = 0; i < pcells_profiles_warning_count(raw); ++i) {
        run.warn(pcells_profiles_warning(raw, i));
    }
    auto opts = run.report_options(digest);
    write_report(run, "profile_matrix", [&](const std::string& path) {
        check(pcells_profiles_write(raw, &opts, path.c_str()), "writing profile matrix");
    });
}

void cmd_generate(Run& run, const Options& o)
{
    if (o.spec.empty()) {
        usage("--spec is required");
    }
    run.param("spec", fs::path(o.spec).filename().string());
    run.param("seed", std::to_string(o.seed));
    run.input("spec", o.spec);
    std::ifstream in(o.spec, std::ios::binary);
    if (!in) {
        throw Failure{ExitIo, "cannot read " + o.spec};
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    pcells_corpus* raw = nullptr;
    check(pcells_corpus_generate(text.data(), text.size(), o.seed, &raw), "generating corpus");
    CorpusPtr corpus(raw);
    log("generated " + std::to_string(pcells_corpus_size(raw)) + " publications");

    fs::create_directories(run.output_path(""));
    const bool jsonl = o.format == "json";
    const auto pubs = run.output_path(jsonl ? "publications.jsonl" : "publications.csv");
    const auto cats = run.output_path("categories.csv");
    check(pcells_corpus_write(raw, pubs.string().c_str(), cats.string().c_str(),
                              jsonl ? PCELLS_DATA_JSONL : PCELLS_DATA_CSV),
          "writing corpus");
    run.output(pubs);
    run.output(cats);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Partition-cell citation reference values, sensitivity analysis and researcher profiles", "pcells"};
    app.set_version_flag("--version", std::string(pcells_version()));
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--pubs", o.pubs, "Publications file (.csv or .jsonl)");
    app.add_option("--cats", o.cats, "Category registry CSV (code,name)");
    app.add_option("--out-dir", o.out_dir, "Directory for reports and the run manifest")->capture_default_str();
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--doc-type", o.doc_type, "Document type admitted to cells")->capture_default_str();
    app.add_option("--years", o.years, "Publication years A-B (default 2005-2007; profile 2000-2007)");
    app.add_option("--windows", o.windows, "Citation windows w1,w2,... (default 3,4,5)")->delimiter(',');
    app.add_option("--css-k", o.css_k, "CSS class used as threshold T")->capture_default_str();
    app.add_flag("--strict", o.strict, "Fail on the first invalid row");
    app.add_option("--triples", o.triples, "Adjacent-cell triples i:j[,i:j...]")->capture_default_str();
    app.add_option("--year-pairs", o.year_pairs, "Year pairs a:b[,...] (default consecutive years)");
    app.add_option("--window-pairs", o.window_pairs, "Window pairs a:b[,...] (default consecutive windows)");
    app.add_option("--ref-table", o.ref_table, "Compare a precomputed reference table instead of --pubs");
    app.add_option("--researchers", o.researchers, "Researcher ids id1,id2,... (default all)");
    app.add_option("--window", o.window, "Citation window for profile mean citations")->capture_default_str();
    app.add_option("--spec", o.spec, "Generator spec (JSON)");
    app.add_option("--seed", o.seed, "Generator seed")->capture_default_str();

    app.add_subcommand("validate", "Check a publications file");
    app.add_subcommand("refvalues", "Compute per-cell reference values e and T");
    app.add_subcommand("compare", "Relative differences across years, windows and adjacent cells");
    app.add_subcommand("profile", "Researcher cell-share matrix");
    app.add_subcommand("generate", "Write a synthetic corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitOk : ExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Run run(command, o);
    int exit_code = ExitOk;
    std::string error;
    try {
        validate_common(o);
        if (command == "validate") {
            cmd_validate(run, o);
        } else if (command == "refvalues") {
            cmd_refvalues(run, o);
        } else if (command == "compare") {
            cmd_compare(run, o);
        } else if (command == "profile") {
            cmd_profile(run, o);
        } else {
            cmd_generate(run, o);
        }
    } catch (const Failure& f) {
        exit_code = f.exit_code;
        error = f.message;
    } catch (const fs::filesystem_error& e) {
        exit_code = ExitIo;
        error = e.what();
    } catch (const std::exception& e) {
        exit_code = ExitAnalysis;
        error = e.what();
    }
    if (!error.empty()) {
        log("error: " + error);
    }
    if (exit_code != ExitUsage) {
        std::error_code ec;
        fs::create_directories(o.out_dir, ec);
        run.write_manifest(exit_code, error);
    }
    return exit_code;
}
